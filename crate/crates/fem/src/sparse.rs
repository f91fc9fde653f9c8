//! Sparse storage: Hermitian matrices in 2x2 block CSR form, reverse Cuthill-McKee ordering
//! and an envelope (skyline) `L D L^*` factorization.

use std::collections::VecDeque;

use num_complex::Complex64 as C64;

use crate::{FemError, Result};

pub type Block = [C64; 4];

pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Hermitian matrix stored by 2x2 blocks, both triangles present, columns sorted per row.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockCsr {
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    /// Row-major blocks.
    pub vals: Vec<Block>,
}

impl BlockCsr {
    pub fn from_adjacency(adj: &[Vec<usize>]) -> Self {
        let mut row_ptr = Vec::with_capacity(adj.len() + 1);
        let mut cols = Vec::new();
        row_ptr.push(0);
        for row in adj {
            cols.extend_from_slice(row);
            row_ptr.push(cols.len());
        }
        let vals = vec![[ZERO; 4]; cols.len()];
        Self { row_ptr, cols, vals }
    }

    pub fn n_blocks(&self) -> usize {
        self.row_ptr.len() - 1
    }

    /// Scalar dimension.
    pub fn dim(&self) -> usize {
        2 * self.n_blocks()
    }

    pub fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let row = &self.cols[self.row_ptr[i]..self.row_ptr[i + 1]];
        row.binary_search(&j).ok().map(|k| self.row_ptr[i] + k)
    }

    /// Scalar entry `(r, c)`.
    pub fn get(&self, r: usize, c: usize) -> C64 {
        match self.slot(r / 2, c / 2) {
            Some(s) => self.vals[s][2 * (r % 2) + c % 2],
            None => ZERO,
        }
    }

    /// `y = A x` for `p` right-hand sides stored row-major (`x[i * p + c]`).
    pub fn apply_block(&self, x: &[C64], y: &mut [C64], p: usize) {
        debug_assert_eq!(x.len(), self.dim() * p);
        y.iter_mut().for_each(|v| *v = ZERO);
        for i in 0..self.n_blocks() {
            let (y0, y1) = y[2 * i * p..2 * (i + 1) * p].split_at_mut(p);
            for s in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.cols[s];
                let b = &self.vals[s];
                let x0 = &x[2 * j * p..(2 * j + 1) * p];
                let x1 = &x[(2 * j + 1) * p..(2 * j + 2) * p];
                for c in 0..p {
                    y0[c] += b[0] * x0[c] + b[1] * x1[c];
                    y1[c] += b[2] * x0[c] + b[3] * x1[c];
                }
            }
        }
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![ZERO; x.len()];
        self.apply_block(x, &mut y, 1);
        y
    }

    /// `x^* A y`
    pub fn form(&self, x: &[C64], y: &[C64]) -> C64 {
        self.apply(y).iter().zip(x).map(|(a, b)| b.conj() * a).sum()
    }

    /// Largest `|A_rc - conj(A_cr)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n_blocks() {
            for s in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.cols[s];
                let t = self.slot(j, i).map(|t| self.vals[t]).unwrap_or([ZERO; 4]);
                let b = self.vals[s];
                for (r, c) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                    worst = worst.max((b[2 * r + c] - t[2 * c + r].conj()).norm());
                }
            }
        }
        worst
    }

    /// Scalar entries `(row, col, value)` with `row >= col`, by rows, columns ascending.
    pub fn lower_entries(&self) -> Vec<(usize, usize, C64)> {
        let mut out = Vec::new();
        for i in 0..self.n_blocks() {
            for r in 0..2 {
                let row = 2 * i + r;
                for s in self.row_ptr[i]..self.row_ptr[i + 1] {
                    let j = self.cols[s];
                    for c in 0..2 {
                        let col = 2 * j + c;
                        if col <= row {
                            out.push((row, col, self.vals[s][2 * r + c]));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Reverse Cuthill-McKee permutation of a symmetric graph: `perm[old] = new`.
pub fn reverse_cuthill_mckee(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let degree = |v: usize| adj[v].len();
    let mut order = Vec::with_capacity(n);
    let mut visited = vec![false; n];
    let bfs_levels = |start: usize, seen: &mut Vec<bool>| -> Vec<Vec<usize>> {
        let mut levels = vec![vec![start]];
        let mut mark = vec![start];
        seen[start] = true;
        loop {
            let mut next = Vec::new();
            for &v in levels.last().unwrap() {
                for &u in &adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        mark.push(u);
                        next.push(u);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            levels.push(next);
        }
        for v in mark {
            seen[v] = false;
        }
        levels
    };
    for root in 0..n {
        if visited[root] {
            continue;
        }
        // pseudo-peripheral start: repeat BFS from a minimum-degree vertex of the last level
        let mut start = root;
        let mut scratch = visited.clone();
        let mut ecc = bfs_levels(start, &mut scratch).len();
        loop {
            let levels = bfs_levels(start, &mut scratch);
            let cand = *levels.last().unwrap().iter().min_by_key(|&&v| (degree(v), v)).unwrap();
            let e = bfs_levels(cand, &mut scratch).len();
            if e > ecc {
                ecc = e;
                start = cand;
            } else {
                break;
            }
        }
        let mut queue = VecDeque::from([start]);
        visited[start] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = adj[v].iter().copied().filter(|&u| !visited[u]).collect();
            next.sort_by_key(|&u| (degree(u), u));
            for u in next {
                if !visited[u] {
                    visited[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    let mut perm = vec![0; n];
    for (k, &v) in order.iter().rev().enumerate() {
        perm[v] = k;
    }
    perm
}

/// `L D L^*` of a Hermitian matrix in envelope storage, without pivoting.
#[derive(Debug, Clone)]
pub struct Skyline {
    n: usize,
    /// First stored column of each row.
    first: Vec<usize>,
    /// Offset of `(i, first[i])` in `data`.
    start: Vec<usize>,
    /// Strictly lower part of `L`, row by row.
    data: Vec<C64>,
    d: Vec<f64>,
}

impl Skyline {
    /// Factorizes `a - sigma b`. Requires the two matrices to share a block pattern.
    pub fn factor(a: &BlockCsr, b: &BlockCsr, sigma: f64) -> Result<Self> {
        Self::factor_inner(a, b, sigma, true)
    }

    /// Like [`Skyline::factor`] but tolerates negative pivots, for inertia counts.
    pub fn factor_indefinite(a: &BlockCsr, b: &BlockCsr, sigma: f64) -> Result<Self> {
        Self::factor_inner(a, b, sigma, false)
    }

    fn factor_inner(a: &BlockCsr, b: &BlockCsr, sigma: f64, definite: bool) -> Result<Self> {
        assert_eq!(a.row_ptr, b.row_ptr);
        let n = a.dim();
        let mut first = vec![0usize; n];
        for i in 0..a.n_blocks() {
            let j0 = a.cols[a.row_ptr[i]..a.row_ptr[i + 1]]
                .first()
                .copied()
                .unwrap_or(i)
                .min(i);
            first[2 * i] = 2 * j0;
            first[2 * i + 1] = 2 * j0;
        }
        let mut start = vec![0usize; n + 1];
        for i in 0..n {
            start[i + 1] = start[i] + (i - first[i]);
        }
        let mut data = vec![ZERO; start[n]];
        let mut d = vec![0.0f64; n];
        let mut diag = vec![ZERO; n];
        // scatter the strictly lower part of a - sigma b
        for bi in 0..a.n_blocks() {
            for s in a.row_ptr[bi]..a.row_ptr[bi + 1] {
                let bj = a.cols[s];
                if bj > bi {
                    continue;
                }
                for r in 0..2 {
                    for c in 0..2 {
                        let (row, col) = (2 * bi + r, 2 * bj + c);
                        let v = a.vals[s][2 * r + c] - b.vals[s][2 * r + c] * sigma;
                        if col < row {
                            data[start[row] + col - first[row]] = v;
                        } else if col == row {
                            diag[row] = v;
                        }
                    }
                }
            }
        }
        let scale = diag
            .iter()
            .map(|v| v.re.abs())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        for i in 0..n {
            let fi = first[i];
            let (done, rest) = data.split_at_mut(start[i]);
            let row = &mut rest[..i - fi];
            // row holds u_ik = L_ik d_k once processed
            for j in fi..i {
                let fj = first[j];
                let k0 = fi.max(fj);
                let lj = &done[start[j] + k0 - fj..start[j] + j - fj];
                let mut s = row[j - fi];
                let ri = &row[k0 - fi..j - fi];
                for (x, y) in ri.iter().zip(lj) {
                    s -= x * y.conj();
                }
                row[j - fi] = s;
            }
            let mut piv = diag[i].re;
            for (k, u) in row.iter_mut().enumerate() {
                let dk = d[fi + k];
                piv -= u.norm_sqr() / dk;
                *u /= dk;
            }
            let breakdown = !piv.is_finite() || piv.abs() <= 1e-14 * scale || (definite && piv <= 0.0);
            if breakdown {
                return Err(FemError::FactorizationBreakdown { row: i, pivot: piv });
            }
            d[i] = piv;
        }
        Ok(Self {
            n,
            first,
            start,
            data,
            d,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn stored_entries(&self) -> usize {
        self.data.len()
    }

    pub fn negative_pivots(&self) -> usize {
        self.d.iter().filter(|&&x| x < 0.0).count()
    }

    /// Solves in place for `p` right-hand sides stored row-major.
    pub fn solve_block(&self, x: &mut [C64], p: usize) {
        let n = self.n;
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            let (before, rest) = x.split_at_mut(i * p);
            let xi = &mut rest[..p];
            for (k, l) in row.iter().enumerate() {
                let xk = &before[(fi + k) * p..(fi + k + 1) * p];
                for c in 0..p {
                    xi[c] -= l * xk[c];
                }
            }
        }
        for i in 0..n {
            let inv = 1.0 / self.d[i];
            x[i * p..(i + 1) * p].iter_mut().for_each(|v| *v *= inv);
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            let (before, rest) = x.split_at_mut(i * p);
            let xi = &rest[..p];
            for (k, l) in row.iter().enumerate() {
                let lc = l.conj();
                let xk = &mut before[(fi + k) * p..(fi + k + 1) * p];
                for c in 0..p {
                    xk[c] -= lc * xi[c];
                }
            }
        }
    }
}
