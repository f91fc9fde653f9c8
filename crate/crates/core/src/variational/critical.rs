//! Critical half-angle below which the test family certifies `N` gap eigenvalues.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{energy_breakdown, EnergyBreakdown, TestFunctionFamily};
use crate::model::{validate_tau, PhysParams};
use crate::{Error, Result};

/// `F`, `G`, `H` and the maximizer `x_star` of the reduced problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalTerms {
    pub f: f64,
    pub g: f64,
    pub h: f64,
    pub x_star: f64,
}

impl CriticalTerms {
    pub fn new(tau: f64, n_modes: u32) -> Result<Self> {
        check_regime(tau, n_modes)?;
        let t2 = tau * tau;
        let nn = (n_modes as f64).powi(2) * PI * PI;
        let f = nn * (4.0 + t2).powi(2) * (16.0 * t2 + (4.0 + t2).powi(2));
        let g = ((4.0 - t2).powi(2) + (4.0 + t2).powi(2)) * 4.0 * tau.abs() * (4.0 + t2);
        let h = 8.0 * t2 * (4.0 - t2).powi(2);
        let q = nn * h + f / 2.0;
        let x_star = q + (q * q + 4.0 * f * q).sqrt();
        Ok(Self { f, g, h, x_star })
    }
}

fn check_regime(tau: f64, n_modes: u32) -> Result<()> {
    validate_tau(tau)?;
    if tau > 0.0 {
        return Err(Error::Regime(format!("tau < 0 (got tau = {tau})")));
    }
    if n_modes == 0 {
        return Err(Error::InvalidParameter {
            name: "N",
            value: 0.0,
            reason: "at least one mode is required".into(),
        });
    }
    Ok(())
}

/// Closed-form critical angle; independent of `m`.
pub fn critical_angle_closed(tau: f64, n_modes: u32) -> Result<f64> {
    let t = CriticalTerms::new(tau, n_modes)?;
    let nn = (n_modes as f64).powi(2) * PI * PI;
    let num = t.x_star * t.h.powf(1.5);
    let den = t.g * (2.0 * nn * t.h + t.f + t.x_star) * (t.f + t.x_star).sqrt();
    Ok((num / den).atan())
}

/// Strip parameter at which the closed-form maximum is attained.
pub fn critical_length_closed(p: &PhysParams, n_modes: u32) -> Result<f64> {
    let t = CriticalTerms::new(p.tau, n_modes)?;
    Ok(((t.f + t.x_star) / t.h).sqrt() / p.m)
}

/// Numerator, denominator and their `L`-derivatives of `tan omega(L)`.
fn ratio_parts(p: &PhysParams, n_modes: u32, l: f64) -> (f64, f64, f64, f64) {
    let (t, m) = (p.tau, p.m);
    let t2 = t * t;
    let nn = (n_modes as f64).powi(2) * PI * PI;
    let a = nn * (4.0 + t2).powi(2) * (16.0 * t2 + (4.0 + t2).powi(2));
    let b = 8.0 * t2 * (4.0 - t2).powi(2);
    let c = ((4.0 - t2).powi(2) + (4.0 + t2).powi(2)) * 4.0 * m * t * (4.0 + t2);
    let num = a - b * m * m * l * l;
    let den = (2.0 * nn + m * m * l * l) * c * l;
    let dnum = -2.0 * b * m * m * l;
    let dden = c * (2.0 * nn + 3.0 * m * m * l * l);
    (num, den, dnum, dden)
}

/// `omega(L)`: the angle at which the upper estimate of the gap vanishes. Negative when the
/// estimate cannot be made negative at this `L`.
pub fn omega_for_length(p: &PhysParams, n_modes: u32, l: f64) -> f64 {
    let (num, den, _, _) = ratio_parts(p, n_modes, l);
    (num / den).atan()
}

/// The same angle written through `kappa0` and `kappa_tau`.
pub fn omega_zeroing_bound(p: &PhysParams, n_modes: u32, l: f64) -> f64 {
    let c = p.constants();
    let (t, m, z, k) = (p.tau, p.m, c.kappa0, c.kappa_tau);
    let nn = (n_modes as f64).powi(2) * PI * PI;
    let num = -4.0 * m * l * l * t * z - 2.0 * nn * k * (4.0 + t * t);
    let den = (2.0 * nn + m * m * l * l) * (3.0 + k) * l * z * (4.0 + t * t);
    (num / den).atan()
}

/// Maximizes `omega(L)` over `L > 0`: log-grid bracketing, golden section, then bisection on
/// the sign of `d/dL tan omega(L)`. Returns `(omega_star, L_star)`.
pub fn critical_angle_maximize(p: &PhysParams, n_modes: u32) -> Result<(f64, f64)> {
    check_regime(p.tau, n_modes)?;
    let samples = 600;
    let (s_lo, s_hi) = ((1e-8 / p.m).ln(), (1e12 / p.m).ln());
    let grid: Vec<(f64, f64)> = (0..=samples)
        .map(|i| {
            let s = s_lo + (s_hi - s_lo) * i as f64 / samples as f64;
            (s, omega_for_length(p, n_modes, s.exp()))
        })
        .collect();
    let (imax, _) = grid
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .expect("non-empty");
    if imax == 0 || imax == samples || grid[imax].1 <= 0.0 {
        return Err(Error::Optimization {
            trace: grid.iter().step_by(20).map(|&(s, w)| (s.exp(), w)).collect(),
        });
    }
    let (mut a, mut b) = (grid[imax - 1].0, grid[imax + 1].0);
    let f = |s: f64| omega_for_length(p, n_modes, s.exp());
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if b - a < 1e-9 {
            break;
        }
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    // The derivative of num/den changes sign at the maximum.
    let slope = |l: f64| {
        let (num, den, dnum, dden) = ratio_parts(p, n_modes, l);
        dnum * den - num * dden
    };
    let (mut lo, mut hi) = ((a - 1e-6).exp(), (b + 1e-6).exp());
    let s_lo_sign = slope(lo) > 0.0;
    if s_lo_sign == (slope(hi) > 0.0) {
        let l = (0.5 * (a + b)).exp();
        return Ok((omega_for_length(p, n_modes, l), l));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (slope(mid) > 0.0) == s_lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let l = 0.5 * (lo + hi);
    Ok((omega_for_length(p, n_modes, l), l))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// True iff every single-mode member has a negative gap.
    pub certified: bool,
    pub length: f64,
    pub per_mode: Vec<EnergyBreakdown>,
    /// Breakdown for all unit coefficients together.
    pub total: EnergyBreakdown,
}

/// Builds the `N`-mode family at the optimal strip parameter and evaluates it at the angle
/// in `p`. A `true` result certifies at least `N` eigenvalues of the squared operator below
/// `eps_tau^2`; `false` is inconclusive.
pub fn bound_state_certificate(p: &PhysParams, n_modes: u32) -> Result<Certificate> {
    p.require_corner()?;
    let length = critical_length_closed(p, n_modes)?;
    let n = n_modes as usize;
    let mut per_mode = Vec::with_capacity(n);
    for k in 0..n {
        let mut c = vec![crate::C64::new(0.0, 0.0); n];
        c[k] = crate::C64::new(1.0, 0.0);
        per_mode.push(energy_breakdown(&TestFunctionFamily::new(*p, length, c)?));
    }
    let total = energy_breakdown(&TestFunctionFamily::unit(*p, length, n)?);
    Ok(Certificate {
        certified: per_mode.iter().all(|e| e.form_gap < 0.0),
        length,
        per_mode,
        total,
    })
}
