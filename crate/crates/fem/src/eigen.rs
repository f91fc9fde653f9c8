//! Lowest eigenpairs of `A x = mu B x` by shift-invert subspace iteration with
//! Rayleigh-Ritz projection.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assemble::HermitianPencil;
use crate::sparse::{Skyline, ZERO};
use crate::{FemError, Result};

/// Residual bound every reported pair satisfies.
pub const RESIDUAL_BOUND: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Iteration stops once all requested residuals fall below this.
    pub tol: f64,
    pub max_iter: usize,
    /// Extra block vectors beyond the requested count.
    pub guard: usize,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 2000,
            guard: 8,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    /// Column `i` is `vectors[r * k + i]`, B-normalized.
    pub vectors: Vec<C64>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

/// `y^* x` for row-major blocks of width `p` and `q`: a `p x q` matrix.
fn gram(y: &[C64], p: usize, x: &[C64], q: usize) -> DMatrix<C64> {
    let n = y.len() / p;
    let mut g = DMatrix::from_element(p, q, ZERO);
    for r in 0..n {
        let yr = &y[r * p..(r + 1) * p];
        let xr = &x[r * q..(r + 1) * q];
        for i in 0..p {
            let yc = yr[i].conj();
            for j in 0..q {
                g[(i, j)] += yc * xr[j];
            }
        }
    }
    g
}

/// `y = x c` for a row-major block `x` of width `p` and `c` of size `p x q`.
fn combine(x: &[C64], p: usize, c: &DMatrix<C64>) -> Vec<C64> {
    let q = c.ncols();
    let n = x.len() / p;
    let mut y = vec![ZERO; n * q];
    for r in 0..n {
        let xr = &x[r * p..(r + 1) * p];
        let yr = &mut y[r * q..(r + 1) * q];
        for i in 0..p {
            for j in 0..q {
                yr[j] += xr[i] * c[(i, j)];
            }
        }
    }
    y
}

fn sorted_eigen(m: DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let h = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    let e = SymmetricEigen::new(h);
    let mut idx: Vec<usize> = (0..e.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
    let vals = idx.iter().map(|&i| e.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(e.eigenvectors.nrows(), idx.len(), |r, c| e.eigenvectors[(r, idx[c])]);
    (vals, vecs)
}

/// `k` lowest eigenpairs. `sigma` must lie below the spectrum so that `A - sigma B` is
/// positive definite.
pub fn solve_lowest(pencil: &HermitianPencil, k: usize, sigma: f64, opts: &SolverOptions) -> Result<Eigenpairs> {
    let n = pencil.dim();
    if k == 0 || k > n {
        return Err(FemError::InvalidOption {
            name: "k",
            value: k as f64,
            reason: format!("must lie in 1..={n}"),
        });
    }
    let p = (k + opts.guard).min(n);
    let factor = Skyline::factor(&pencil.a, &pencil.b, sigma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x: Vec<C64> = (0..n * p)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let mut bx = vec![ZERO; n * p];
    let mut ay = vec![ZERO; n * p];
    let mut by = vec![ZERO; n * p];
    let mut residuals = vec![f64::INFINITY; k];
    let mut values = vec![0.0; k];
    let mut width = p;
    for it in 1..=opts.max_iter {
        pencil.b.apply_block(&x, &mut bx[..n * width], width);
        let mut y = bx[..n * width].to_vec();
        factor.solve_block(&mut y, width);
        pencil.a.apply_block(&y, &mut ay[..n * width], width);
        pencil.b.apply_block(&y, &mut by[..n * width], width);
        // B-orthonormal basis of span(y), dropping numerically dependent directions
        let (gv, gq) = sorted_eigen(gram(&y, width, &by[..n * width], width));
        let top = gv.last().copied().unwrap_or(0.0);
        let keep: Vec<usize> = (0..width).filter(|&i| gv[i] > 1e-13 * top).collect();
        if keep.len() < k {
            return Err(FemError::NonConvergence {
                iterations: it,
                residuals: residuals.clone(),
            });
        }
        let basis = DMatrix::from_fn(width, keep.len(), |r, c| gq[(r, keep[c])] / gv[keep[c]].sqrt());
        let ha = basis.adjoint() * gram(&y, width, &ay[..n * width], width) * &basis;
        let (theta, q) = sorted_eigen(ha);
        let coef = &basis * q;
        let new_width = keep.len();
        let xa = combine(&ay[..n * width], width, &coef);
        let xb = combine(&by[..n * width], width, &coef);
        x = combine(&y, width, &coef);
        for i in 0..k {
            let mut num = 0.0;
            let mut den = 0.0;
            for r in 0..n {
                let a = xa[r * new_width + i];
                let b = xb[r * new_width + i];
                num += (a - b * theta[i]).norm_sqr();
                den += b.norm_sqr();
            }
            residuals[i] = (num / den).sqrt();
            values[i] = theta[i];
        }
        width = new_width;
        if residuals.iter().all(|&r| r <= opts.tol) {
            return Ok(finish(values, x, width, k, residuals, it));
        }
    }
    if residuals.iter().all(|&r| r <= RESIDUAL_BOUND) {
        return Ok(finish(values, x, width, k, residuals, opts.max_iter));
    }
    Err(FemError::NonConvergence {
        iterations: opts.max_iter,
        residuals,
    })
}

fn finish(values: Vec<f64>, x: Vec<C64>, width: usize, k: usize, residuals: Vec<f64>, iterations: usize) -> Eigenpairs {
    let n = x.len() / width;
    let mut vectors = Vec::with_capacity(n * k);
    for r in 0..n {
        vectors.extend_from_slice(&x[r * width..r * width + k]);
    }
    Eigenpairs {
        values,
        vectors,
        residuals,
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::BlockCsr;

    #[test]
    fn diagonal_pencil() {
        let nb = 30;
        let adj: Vec<Vec<usize>> = (0..nb).map(|i| vec![i]).collect();
        let mut a = BlockCsr::from_adjacency(&adj);
        let mut b = BlockCsr::from_adjacency(&adj);
        for i in 0..nb {
            a.vals[i] = [
                C64::new(2.0 * i as f64 + 3.0, 0.0),
                ZERO,
                ZERO,
                C64::new(2.0 * i as f64 + 1.0, 0.0),
            ];
            b.vals[i] = [C64::new(2.0, 0.0), ZERO, ZERO, C64::new(1.0, 0.0)];
        }
        let pencil = HermitianPencil {
            a,
            b,
            dof_map: crate::assemble::DofMap {
                vertex: Vec::new(),
                n_blocks: nb,
            },
        };
        let e = solve_lowest(&pencil, 3, -0.5, &SolverOptions::default()).unwrap();
        assert_eq!(e.values.len(), 3);
        for (v, want) in e.values.iter().zip([1.0, 1.5, 2.5]) {
            assert!((v - want).abs() < 1e-12, "{v}");
        }
        assert!(e.residuals.iter().all(|&r| r <= 1e-10));
    }
}
