//! Singular sequence along `Gamma_l` for `tau < 0`: a transversal profile decaying like
//! `e^{-kappa0 |zeta|}` on both sides of the ray, glued by `M_l`, cut off in both directions.

use serde::{Deserialize, Serialize};

use super::weyl::cutoff;
use crate::model::{m_left, sigma, Mat2, PhysParams};
use crate::quad::gl_nodes;
use crate::{Result, C64};

/// Offset `K` in the centres `x_n = n^2 + K` along the ray.
const OFFSET: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularSeqReport {
    /// `max |z (M_l^2 + 1) + 8 m tau/(4 - tau^2) M_l|`
    pub identity_sum: f64,
    /// `max |(2m/tau) (1 - M_l)^2 - 8 m tau/(4 - tau^2) M_l|`
    pub identity_square: f64,
    /// `|v(0-) - M_l v(0+)|`
    pub profile_jump: f64,
    /// Transversal compression `c` keeping the support away from `Gamma_r`.
    pub c: f64,
    pub c1: f64,
    pub c2: f64,
    /// `(n, |psi_n|^2)`
    pub norms: Vec<(u32, f64)>,
    pub norms_within_bounds: bool,
}

fn max_abs(m: &Mat2) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Transversal profile `v(zeta)` for `a = (1, 0)`.
fn profile(ml: &Mat2, z: f64, zeta: f64, from_below: bool) -> [C64; 2] {
    if zeta > 0.0 || (zeta == 0.0 && !from_below) {
        let e = (-z * zeta).exp();
        [C64::from(e), C64::from(0.0)]
    } else {
        let e = (z * zeta).exp();
        [ml[(0, 0)] * e, ml[(1, 0)] * e]
    }
}

pub fn singular_seq_identities(p: &PhysParams) -> Result<SingularSeqReport> {
    p.require_corner()?;
    p.require_attractive()?;
    let cst = p.constants();
    let (t, m, z) = (p.tau, p.m, cst.kappa0);
    let ml = m_left(p).entries;
    let id = sigma(0);
    let k = 8.0 * m * t / (4.0 - t * t);
    let identity_sum = max_abs(&((ml * ml + id) * C64::from(z) + ml * C64::from(k)));
    let d = id - ml;
    let identity_square = max_abs(&(d * d * C64::from(2.0 * m / t) - ml * C64::from(k)));

    let above = profile(&ml, z, 0.0, false);
    let below = profile(&ml, z, 0.0, true);
    let glued = [
        ml[(0, 0)] * above[0] + ml[(0, 1)] * above[1],
        ml[(1, 0)] * above[0] + ml[(1, 1)] * above[1],
    ];
    let profile_jump = ((below[0] - glued[0]).norm_sqr() + (below[1] - glued[1]).norm_sqr()).sqrt();

    // The support |xi - x_n| <= n, |zeta| <= n / c must miss Gamma_r, which sits at
    // (xi, zeta) = s (cos 2w, sin 2w). For w >= pi/4 the ray has xi <= 0 < x_n - n.
    let w = p.omega;
    let c = if 2.0 * w >= std::f64::consts::FRAC_PI_2 {
        1.0
    } else {
        let worst = (1..=64)
            .map(|n| {
                let n = n as f64;
                n / (n * n - n + OFFSET)
            })
            .fold(0.0, f64::max);
        2.0 * worst / (2.0 * w).tan()
    };

    // |v|^2 = e^{-2 z |zeta|} above and |M_l a|^2 e^{-2 z |zeta|} below.
    let below_sq = ml[(0, 0)].norm_sqr() + ml[(1, 0)].norm_sqr();
    let chi_sq = {
        let mut s = 0.0;
        gl_nodes(-1.0, 1.0, 16, |x, wx| s += wx * cutoff(x).powi(2));
        s
    };
    let v_int = |half: f64| (1.0 + below_sq) * (1.0 - (-2.0 * z * half).exp()) / (2.0 * z);
    let c1 = chi_sq * v_int(1.0 / (2.0 * c));
    let c2 = chi_sq * (1.0 + below_sq) / (2.0 * z);

    let mut norms = Vec::new();
    for n in [2u32, 4, 8] {
        let nf = n as f64;
        let xn = nf * nf + OFFSET;
        let zmax = nf / c;
        let mut total = 0.0;
        gl_nodes(xn - nf, xn + nf, 16, |xi, wx| {
            let cx = cutoff((xi - xn) / nf);
            for (a, b) in [(-zmax, 0.0), (0.0, zmax)] {
                gl_nodes(a, b, 32, |zeta, wz| {
                    let v = profile(&ml, z, zeta, a < 0.0);
                    let amp = cx * cutoff(c * zeta / nf);
                    total += wx * wz * amp * amp * (v[0].norm_sqr() + v[1].norm_sqr()) / nf;
                });
            }
        });
        norms.push((n, total));
    }
    let norms_within_bounds = norms.iter().all(|&(_, v)| v >= c1 && v <= c2);
    Ok(SingularSeqReport {
        identity_sum,
        identity_square,
        profile_jump,
        c,
        c1,
        c2,
        norms,
        norms_within_bounds,
    })
}
