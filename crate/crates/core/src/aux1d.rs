//! One-dimensional interface model on `(-gamma, gamma)`: the form
//! `|f'|^2 + m^2 |f|^2 + (2m/tau) |f(0+) - f(0-)|^2` with `f(0-) = M_tilde f(0+)` and natural
//! end conditions. Its ground state is `E = m^2 - k^2` where `k tanh(k gamma) = kappa0`.

use serde::{Deserialize, Serialize};

use crate::model::PhysParams;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aux1DResult {
    pub gamma: f64,
    pub k_gamma: f64,
    pub e_gamma: f64,
}

/// `F(k) = k tanh(k gamma)`, strictly increasing on `k >= 0`.
pub fn secular_f(k: f64, gamma: f64) -> f64 {
    k * (k * gamma).tanh()
}

pub fn ground_state(p: &PhysParams, gamma: f64) -> Result<Aux1DResult> {
    p.require_attractive()?;
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
            reason: "strip half-width must be positive".into(),
        });
    }
    let z = p.constants().kappa0;
    let g = |k: f64| secular_f(k, gamma) - z;
    let mut lo = z;
    let mut hi = z + 10.0 * p.m + 10.0 / gamma;
    let mut expansions = 0;
    while g(hi) < 0.0 {
        hi *= 2.0;
        expansions += 1;
        if expansions > 60 {
            return Err(Error::Bracket {
                lo,
                hi,
                f_lo: g(lo),
                f_hi: g(hi),
            });
        }
    }
    if g(lo) > 0.0 {
        return Err(Error::Bracket {
            lo,
            hi,
            f_lo: g(lo),
            f_hi: g(hi),
        });
    }
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut k = 0.5 * (lo + hi);
    let kg = k * gamma;
    let dg = kg.tanh() + kg / kg.cosh().powi(2);
    if dg > 0.0 {
        let next = k - g(k) / dg;
        if (next - k).abs() < 1e-10 {
            k = next;
        }
    }
    Ok(Aux1DResult {
        gamma,
        k_gamma: k,
        e_gamma: p.m * p.m - k * k,
    })
}
