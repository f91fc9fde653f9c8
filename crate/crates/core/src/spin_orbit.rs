//! Eigenvalues of the spin-orbit operator
//! `J = -i sigma_3 d/dtheta + 1/2` on the two arcs `(-omega, omega)` and
//! `(omega, 2 pi - omega)`, glued by `phi_-(omega) = M_l phi_+(omega)` and
//! `phi_-(2 pi - omega) = M_r phi_+(-omega)`.
//!
//! On each arc the solutions of `J phi = lambda phi` are
//! `(A e^{i mu theta}, B e^{-i mu theta})` with `mu = lambda - 1/2`, so the problem reduces
//! to the 4x4 matching matrix `T(lambda)` acting on `(A, B, C, D)`.

use std::f64::consts::PI;

use nalgebra::{Matrix4, Vector4, SVD};

use crate::model::{m_left, m_right, Mat2, PhysParams};
use crate::{Error, Result, C64};

/// Grid density of the root scan (points per unit of lambda).
pub const SCAN_DENSITY: f64 = 2000.0;
/// Singular values below this fraction of the largest count toward the multiplicity.
pub const NULL_RTOL: f64 = 1e-7;
/// Distance kept from the excluded points 0 and 1/2 by [`principal_eigenvalue`].
pub const EDGE_DELTA: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SecularSystem {
    pub params: PhysParams,
    pub lambda: f64,
    pub matrix: Matrix4<C64>,
}

impl SecularSystem {
    pub fn det(&self) -> C64 {
        self.matrix.determinant()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinOrbitRoot {
    pub lambda: f64,
    pub multiplicity: usize,
    /// Unit null vectors of `T(lambda)` in the order `(A, B, C, D)`.
    pub coefficients: Vec<[C64; 4]>,
    /// Size of the last Newton correction.
    pub last_step: f64,
}

fn phase_diag(mu: f64, s: f64) -> Mat2 {
    Mat2::new(
        C64::from_polar(1.0, mu * s),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::from_polar(1.0, -mu * s),
    )
}

fn put(t: &mut Matrix4<C64>, r: usize, c: usize, blk: &Mat2) {
    for i in 0..2 {
        for j in 0..2 {
            t[(r + i, c + j)] = blk[(i, j)];
        }
    }
}

/// Matching matrix `T(lambda)`; `lambda` is an eigenvalue iff `det T = 0`.
pub fn secular_matrix(p: &PhysParams, lambda: f64) -> Result<SecularSystem> {
    p.require_corner()?;
    let w = p.omega;
    let mu = lambda - 0.5;
    let ml = m_left(p).entries;
    let mr = m_right(p).entries;
    let mut t = Matrix4::zeros();
    put(&mut t, 0, 0, &(-ml * phase_diag(mu, w)));
    put(&mut t, 0, 2, &phase_diag(mu, w));
    put(&mut t, 2, 0, &(-mr * phase_diag(mu, -w)));
    put(&mut t, 2, 2, &phase_diag(mu, 2.0 * PI - w));
    Ok(SecularSystem {
        params: *p,
        lambda,
        matrix: t,
    })
}

/// Secular determinant. It is real up to roundoff: `det T = 2 - tr P` for the monodromy
/// `P = M_r^{-1} E(2 pi - 2 omega) M_l E(2 omega)`, which has unit determinant.
fn det_at(p: &PhysParams, lambda: f64) -> C64 {
    secular_matrix(p, lambda).expect("validated").det()
}

fn real_det(p: &PhysParams, lambda: f64) -> f64 {
    det_at(p, lambda).re
}

fn null_space(p: &PhysParams, lambda: f64) -> (usize, Vec<[C64; 4]>) {
    let t = secular_matrix(p, lambda).expect("validated").matrix;
    let svd = SVD::new(t, false, true);
    let v_t = svd.v_t.expect("requested");
    let smax = svd.singular_values.max();
    let mut vecs = Vec::new();
    for (k, s) in svd.singular_values.iter().enumerate() {
        if *s < NULL_RTOL * smax {
            let row = v_t.row(k);
            let v: Vector4<C64> = row.adjoint();
            let n = v.norm();
            vecs.push([v[0] / n, v[1] / n, v[2] / n, v[3] / n]);
        }
    }
    (vecs.len(), vecs)
}

/// Bisection on a sign change of the (real) determinant followed by Newton polishing.
fn refine_sign_change(p: &PhysParams, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let mut f_lo = real_det(p, lo);
    for _ in 0..200 {
        if hi - lo <= 1e-14 * (1.0 + lo.abs()) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = real_det(p, mid);
        if f_mid == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    let mut step = f64::INFINITY;
    for _ in 0..8 {
        let h = 1e-6;
        let d = (real_det(p, x + h) - real_det(p, x - h)) / (2.0 * h);
        let f = real_det(p, x);
        if d == 0.0 || f == 0.0 {
            step = 0.0;
            break;
        }
        step = f / d;
        if step.abs() > 1e-8 {
            // Newton strayed; keep the bisection midpoint.
            step = (hi - lo).max(0.0);
            break;
        }
        x -= step;
        if step.abs() <= 1e-15 {
            break;
        }
    }
    (x, step.abs())
}

/// Golden-section search for a minimum of `|det|` in `[lo, hi]`.
fn golden_min(p: &PhysParams, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let f = |x: f64| det_at(p, x).norm();
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > 1e-13 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

fn scan_grid(lo: f64, hi: f64) -> Vec<f64> {
    let n = ((hi - lo) * SCAN_DENSITY).ceil().max(2.0) as usize;
    (0..=n)
        .map(|i| {
            if i == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / n as f64
            }
        })
        .collect()
}

/// All roots of `det T` in `[lo, hi]`, ascending.
pub fn spectrum_in_window(p: &PhysParams, lo: f64, hi: f64) -> Result<Vec<SpinOrbitRoot>> {
    p.require_corner()?;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidParameter {
            name: "window",
            value: hi - lo,
            reason: "need finite lo < hi".into(),
        });
    }
    let grid = scan_grid(lo, hi);
    let dets: Vec<C64> = grid.iter().map(|&l| det_at(p, l)).collect();
    let scale = dets.iter().map(|d| d.norm()).fold(0.0, f64::max).max(1e-300);

    let mut candidates: Vec<(f64, f64)> = Vec::new();
    for i in 0..grid.len() - 1 {
        let (a, b) = (dets[i].re, dets[i + 1].re);
        if a == 0.0 {
            candidates.push((grid[i], 0.0));
        } else if b != 0.0 && (a > 0.0) != (b > 0.0) {
            candidates.push(refine_sign_change(p, grid[i], grid[i + 1]));
        }
    }
    if dets[grid.len() - 1].re == 0.0 {
        candidates.push((hi, 0.0));
    }
    // Touching roots: local minima of |det| without a sign change.
    for i in 1..grid.len() - 1 {
        let (l, c, r) = (dets[i - 1].norm(), dets[i].norm(), dets[i + 1].norm());
        let flips = (dets[i - 1].re > 0.0) != (dets[i].re > 0.0) || (dets[i].re > 0.0) != (dets[i + 1].re > 0.0);
        if c < l && c < r && !flips && c < 1e-3 * scale {
            let (x, v) = golden_min(p, grid[i - 1], grid[i + 1]);
            if v <= 1e-9 * scale {
                candidates.push((x, 0.0));
            }
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
    candidates.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-9);

    let mut roots = Vec::with_capacity(candidates.len());
    for (lambda, last_step) in candidates {
        if lambda < lo || lambda > hi {
            continue;
        }
        let (multiplicity, coefficients) = null_space(p, lambda);
        roots.push(SpinOrbitRoot {
            lambda,
            multiplicity: multiplicity.max(1),
            coefficients: if coefficients.is_empty() {
                vec![smallest_singular_vector(p, lambda)]
            } else {
                coefficients
            },
            last_step,
        });
    }
    Ok(roots)
}

fn smallest_singular_vector(p: &PhysParams, lambda: f64) -> [C64; 4] {
    let t = secular_matrix(p, lambda).expect("validated").matrix;
    let svd = SVD::new(t, false, true);
    let v_t = svd.v_t.expect("requested");
    let k = svd.singular_values.imin();
    let v: Vector4<C64> = v_t.row(k).adjoint();
    let n = v.norm();
    [v[0] / n, v[1] / n, v[2] / n, v[3] / n]
}

/// The unique eigenvalue in `(0, 1/2)`.
pub fn principal_eigenvalue(p: &PhysParams) -> Result<SpinOrbitRoot> {
    let (lo, hi) = (EDGE_DELTA, 0.5 - EDGE_DELTA);
    let roots = spectrum_in_window(p, lo, hi)?;
    match roots.len() {
        1 => Ok(roots.into_iter().next().expect("one root")),
        0 => {
            let grid = scan_grid(lo, hi);
            let samples: Vec<(f64, f64)> = grid.iter().map(|&l| (l, real_det(p, l))).collect();
            let (argmin, min_abs_det) = samples
                .iter()
                .map(|&(l, d)| (l, d.abs()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("non-empty grid");
            Err(Error::NoRootFound {
                lo,
                hi,
                argmin,
                min_abs_det,
                trace: samples.into_iter().step_by(50).collect(),
            })
        }
        _ => Err(Error::AmbiguousRoot {
            lo,
            hi,
            roots: roots.iter().map(|r| r.lambda).collect(),
        }),
    }
}

impl SpinOrbitRoot {
    /// `|T(lambda) v|` for the first null vector.
    pub fn residual(&self, p: &PhysParams) -> f64 {
        let t = secular_matrix(p, self.lambda).expect("validated").matrix;
        let v = Vector4::from_column_slice(&self.coefficients[0]);
        (t * v).norm()
    }

    /// Eigenfunction `phi_lambda(theta)` for the first null vector, normalized in
    /// `L^2(0, 2 pi)` and extended 2 pi-periodically: `[0, omega]` and `(2 pi - omega, 2 pi)`
    /// use the inner arc, `(omega, 2 pi - omega]` the outer one.
    pub fn eigenfunction(&self, p: &PhysParams, theta: f64) -> [C64; 2] {
        let [a, b, c, d] = self.coefficients[0];
        let w = p.omega;
        let norm2 = 2.0 * w * (a.norm_sqr() + b.norm_sqr()) + (2.0 * PI - 2.0 * w) * (c.norm_sqr() + d.norm_sqr());
        let s = 1.0 / norm2.sqrt();
        let mu = self.lambda - 0.5;
        let t = theta.rem_euclid(2.0 * PI);
        let (x, y, arg) = if t <= w {
            (a, b, t)
        } else if t <= 2.0 * PI - w {
            (c, d, t)
        } else {
            (a, b, t - 2.0 * PI)
        };
        [x * C64::from_polar(s, mu * arg), y * C64::from_polar(s, -mu * arg)]
    }
}
