//! Banded Hermitian matrices and Sylvester inertia counts.

use num_complex::Complex64 as C64;

/// Lower band of a Hermitian matrix: `get(i, j)` for `i - bw <= j <= i`.
#[derive(Debug, Clone)]
pub struct BandHermitian {
    pub n: usize,
    pub bw: usize,
    data: Vec<C64>,
}

impl BandHermitian {
    pub fn zeros(n: usize, bw: usize) -> Self {
        Self {
            n,
            bw,
            data: vec![C64::new(0.0, 0.0); n * (bw + 1)],
        }
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j <= i && i - j <= self.bw, "({i}, {j}) outside band {}", self.bw);
        i * (self.bw + 1) + (self.bw + j - i)
    }

    /// Adds `v` at `(i, j)` (and implicitly its conjugate at `(j, i)`). Entries above the
    /// diagonal are folded to the lower triangle.
    pub fn add(&mut self, i: usize, j: usize, v: C64) {
        if j <= i {
            let k = self.idx(i, j);
            self.data[k] += v;
        } else {
            let k = self.idx(j, i);
            self.data[k] += v.conj();
        }
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        if j <= i {
            if i - j > self.bw {
                return C64::new(0.0, 0.0);
            }
            self.data[self.idx(i, j)]
        } else {
            self.get(j, i).conj()
        }
    }

    /// Number of negative pivots of `LDL^*` of `self - sigma * other`, i.e. the number of
    /// eigenvalues of the pencil below `sigma` when `other` is positive definite.
    pub fn count_below(&self, other: &BandHermitian, sigma: f64) -> usize {
        assert_eq!(self.n, other.n);
        let bw = self.bw.max(other.bw);
        let n = self.n;
        let mut l = vec![C64::new(0.0, 0.0); n * (bw + 1)];
        let at = |i: usize, j: usize| i * (bw + 1) + (bw + j - i);
        let mut d = vec![0.0f64; n];
        let mut negatives = 0;
        for i in 0..n {
            let j0 = i.saturating_sub(bw);
            for j in j0..=i {
                let mut s = self.get(i, j) - other.get(i, j) * sigma;
                let k0 = j0.max(j.saturating_sub(bw));
                for k in k0..j {
                    s -= l[at(i, k)] * d[k] * l[at(j, k)].conj();
                }
                if j < i {
                    l[at(i, j)] = s / d[j];
                } else {
                    let mut piv = s.re;
                    if piv == 0.0 {
                        piv = -f64::EPSILON * (1.0 + sigma.abs());
                    }
                    d[i] = piv;
                    if piv < 0.0 {
                        negatives += 1;
                    }
                }
            }
        }
        negatives
    }
}

/// All eigenvalues of the pencil `(a, b)` in `[0, upper)` by bisection on inertia counts,
/// assuming the pencil is positive semi-definite.
pub fn eigenvalues_below(a: &BandHermitian, b: &BandHermitian, upper: f64, rtol: f64) -> Vec<f64> {
    let total = a.count_below(b, upper);
    let mut lo = vec![-1e-12 * upper.max(1.0); total];
    let mut hi = vec![upper; total];
    for k in 0..total {
        while hi[k] - lo[k] > rtol * hi[k].abs().max(1e-3) {
            let mid = 0.5 * (lo[k] + hi[k]);
            let c = a.count_below(b, mid);
            for (j, (l, h)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                if j < c {
                    *h = h.min(mid);
                } else {
                    *l = l.max(mid);
                }
            }
        }
    }
    lo.iter().zip(&hi).map(|(l, h)| 0.5 * (l + h)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_laplacian() {
        // -u'' on (0, pi) with Dirichlet ends, finite differences: eigenvalues
        // (2 - 2 cos(k h)) / h^2.
        let n = 200;
        let h = std::f64::consts::PI / (n + 1) as f64;
        let mut a = BandHermitian::zeros(n, 1);
        let mut b = BandHermitian::zeros(n, 1);
        for i in 0..n {
            a.add(i, i, C64::new(2.0 / (h * h), 0.0));
            b.add(i, i, C64::new(1.0, 0.0));
            if i > 0 {
                a.add(i, i - 1, C64::new(-1.0 / (h * h), 0.0));
            }
        }
        let ev = eigenvalues_below(&a, &b, 10.0, 1e-13);
        assert_eq!(ev.len(), 3);
        for (k, e) in ev.iter().enumerate() {
            let want = (2.0 - 2.0 * ((k + 1) as f64 * h).cos()) / (h * h);
            assert!((e - want).abs() < 1e-10);
        }
    }
}
