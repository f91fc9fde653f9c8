//! Weyl sequence for `|lambda| > m`: a plane wave of the free Dirac operator cut off on a disk
//! of radius `n` centred at `(-1 - n^2, 0)`, far inside the outer region.

use std::f64::consts::PI;

use crate::model::{sigma, PhysParams};
use crate::quad::gl_nodes;
use crate::{Error, Result, C64};

/// C^2 cut-off: 1 on `[0, 1/2]`, 0 on `[1, inf)`, quintic smoothstep in between.
pub fn cutoff(s: f64) -> f64 {
    let s = s.abs();
    if s <= 0.5 {
        1.0
    } else if s >= 1.0 {
        0.0
    } else {
        let t = 2.0 * (1.0 - s);
        t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)
    }
}

/// Derivative of [`cutoff`] for `s >= 0`.
pub fn cutoff_prime(s: f64) -> f64 {
    if s <= 0.5 || s >= 1.0 {
        0.0
    } else {
        let t = 2.0 * (1.0 - s);
        -2.0 * 30.0 * t * t * (1.0 - t) * (1.0 - t)
    }
}

/// Squared norms from one quadrature pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylEval {
    pub norm_sq: f64,
    pub residual_sq: f64,
}

fn center(n: u32) -> [f64; 2] {
    [-1.0 - (n as f64).powi(2), 0.0]
}

fn check_support(p: &PhysParams, n: u32) -> Result<()> {
    // Distance from the centre to the closed wedge |arg| <= omega.
    let c = center(n);
    let w = p.omega;
    let dist = if w >= std::f64::consts::FRAC_PI_2 {
        c[0].abs()
    } else {
        // the centre lies on the negative axis, opposite to the wedge opening
        (c[0] * c[0] + c[1] * c[1]).sqrt()
    };
    if dist <= n as f64 {
        return Err(Error::SupportCollision(n));
    }
    Ok(())
}

/// Evaluates `|psi_n|^2` and `|(S - lambda) psi_n|^2` with `S = -i sigma . grad + m sigma_3`
/// by polar Gauss-Legendre quadrature around the centre.
pub fn weyl_eval(p: &PhysParams, lambda: f64, n: u32) -> Result<WeylEval> {
    if !(lambda.abs() > p.m) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            value: lambda,
            reason: "need |lambda| > m".into(),
        });
    }
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            value: 0.0,
            reason: "sequence index starts at 1".into(),
        });
    }
    check_support(p, n)?;
    let k = (lambda * lambda - p.m * p.m).sqrt();
    let zeta = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
    let amp = sigma(1) * C64::from(k) + sigma(3) * C64::from(p.m) + sigma(0) * C64::from(lambda);
    let w = [
        amp[(0, 0)] * zeta[0] + amp[(0, 1)] * zeta[1],
        amp[(1, 0)] * zeta[0] + amp[(1, 1)] * zeta[1],
    ];
    let c = center(n);
    let nf = n as f64;
    let scale = 1.0 / nf;
    let i = C64::new(0.0, 1.0);
    let mut norm_sq = 0.0;
    let mut residual_sq = 0.0;
    let angular_cells = 8 + 4 * n as usize;
    for (r0, r1, cells) in [(0.0, 0.5 * nf, 4usize), (0.5 * nf, nf, 8 + n as usize)] {
        gl_nodes(r0, r1, cells, |r, wr| {
            gl_nodes(0.0, 2.0 * PI, angular_cells, |th, wt| {
                let (s, co) = th.sin_cos();
                let x = c[0] + r * co;
                let chi = cutoff(r / nf);
                let dchi = cutoff_prime(r / nf) / nf;
                let (gx, gy) = (dchi * co, dchi * s);
                let phase = C64::from_polar(scale, k * x);
                let psi = [w[0] * phase * chi, w[1] * phase * chi];
                // grad psi = scale e^{ikx} (grad chi + i k e_1 chi) w
                let dx = [w[0] * phase * (gx + i * k * chi), w[1] * phase * (gx + i * k * chi)];
                let dy = [w[0] * phase * gy, w[1] * phase * gy];
                // -i (sigma_1 d_x + sigma_2 d_y) psi + m sigma_3 psi - lambda psi
                let s_psi = [
                    -i * (dx[1] - i * dy[1]) + psi[0] * (p.m - lambda),
                    -i * (dx[0] + i * dy[0]) + psi[1] * (-p.m - lambda),
                ];
                let jac = r * wr * wt;
                norm_sq += jac * (psi[0].norm_sqr() + psi[1].norm_sqr());
                residual_sq += jac * (s_psi[0].norm_sqr() + s_psi[1].norm_sqr());
            });
        });
    }
    Ok(WeylEval { norm_sq, residual_sq })
}

/// `|(S - lambda) psi_n| / |psi_n|`.
pub fn weyl_residual(p: &PhysParams, lambda: f64, n: u32) -> Result<f64> {
    let e = weyl_eval(p, lambda, n)?;
    Ok((e.residual_sq / e.norm_sq).sqrt())
}

pub fn weyl_norm_sq(p: &PhysParams, lambda: f64, n: u32) -> Result<f64> {
    Ok(weyl_eval(p, lambda, n)?.norm_sq)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_shape() {
        assert_eq!(cutoff(0.2), 1.0);
        assert_eq!(cutoff(1.2), 0.0);
        assert!((cutoff(0.75) - 0.5).abs() < 1e-15);
        let h = 1e-6;
        for &s in &[0.6, 0.75, 0.9] {
            let fd = (cutoff(s + h) - cutoff(s - h)) / (2.0 * h);
            assert!((fd - cutoff_prime(s)).abs() < 1e-6);
        }
    }

    #[test]
    fn residual_decays_like_one_over_n() {
        let p = PhysParams::new(-1.0, 1.0, 0.4).unwrap();
        let r4 = weyl_residual(&p, 1.5, 4).unwrap();
        let r8 = weyl_residual(&p, 1.5, 8).unwrap();
        assert!((r8 / r4 - 0.5).abs() < 1e-6);
    }

    #[test]
    fn rejects_inside_gap() {
        let p = PhysParams::new(-1.0, 1.0, 0.4).unwrap();
        assert!(weyl_residual(&p, 0.5, 4).is_err());
        assert!(weyl_residual(&p, 1.5, 0).is_err());
    }
}
