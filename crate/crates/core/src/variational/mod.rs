//! Variational tools for the attractive regime `tau < 0`.
//!
//! The test functions are `u_n(x, y) = f_n(x) g(y) h(x, y)` with
//! `f_n = sin(2 n pi x / L)` on `[L, 2L]`, `g = 1` for `|y| <= 2d` and
//! `g = exp(-kappa0 (|y| - 2d))` beyond, `d = L tan(omega)`, and `h` the piecewise constant
//! spinor `(1, 0)` inside the wedge, `M_l (1, 0)` above it and `M_r (1, 0)` below it.

mod critical;
mod singular;
mod weyl;

pub use critical::{
    bound_state_certificate, critical_angle_closed, critical_angle_maximize, critical_length_closed, omega_for_length,
    omega_zeroing_bound, Certificate, CriticalTerms,
};
pub use singular::{singular_seq_identities, SingularSeqReport};
pub use weyl::{cutoff, cutoff_prime, weyl_eval, weyl_norm_sq, weyl_residual, WeylEval};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::model::PhysParams;
use crate::{Error, Result, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct TestFunctionFamily {
    pub params: PhysParams,
    /// Strip parameter `L`: the family is supported in `[L, 2L] x R`.
    pub length: f64,
    /// Coefficients `c_1..c_N`.
    pub coefficients: Vec<C64>,
}

impl TestFunctionFamily {
    pub fn new(params: PhysParams, length: f64, coefficients: Vec<C64>) -> Result<Self> {
        params.require_corner()?;
        params.require_attractive()?;
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidParameter {
                name: "L",
                value: length,
                reason: "strip parameter must be positive".into(),
            });
        }
        if coefficients.is_empty() {
            return Err(Error::InvalidParameter {
                name: "N",
                value: 0.0,
                reason: "at least one mode is required".into(),
            });
        }
        Ok(Self {
            params,
            length,
            coefficients,
        })
    }

    /// `N` unit coefficients.
    pub fn unit(params: PhysParams, length: f64, n_modes: usize) -> Result<Self> {
        Self::new(params, length, vec![C64::new(1.0, 0.0); n_modes])
    }

    pub fn n_modes(&self) -> usize {
        self.coefficients.len()
    }

    /// `d = L tan(omega)`
    pub fn d(&self) -> f64 {
        self.length * self.params.omega.tan()
    }

    pub fn decay(&self) -> f64 {
        self.params.constants().kappa0
    }
}

/// Terms of `|S u|^2 - eps^2 |u|^2` for the test family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    /// `|u_+ - u_-|^2` on the whole broken line.
    pub jump_sq: f64,
    pub l2_sq: f64,
    pub gradx_sq: f64,
    pub grady_sq: f64,
    /// `|S u|^2 - eps^2 |u|^2`, exact.
    pub form_gap: f64,
    /// Upper estimate of `form_gap` that does not see `cos(omega)` or the mass factor.
    pub bound_gap: f64,
}

pub fn energy_breakdown(f: &TestFunctionFamily) -> EnergyBreakdown {
    let p = &f.params;
    let c = p.constants();
    let (l, w, z, kap) = (f.length, p.omega, c.kappa0, c.kappa_tau);
    let n_modes = f.n_modes() as f64;
    let s: f64 = f.coefficients.iter().map(|c| c.norm_sqr()).sum();
    let weighted: f64 = f
        .coefficients
        .iter()
        .enumerate()
        .map(|(i, c)| c.norm_sqr() * (2.0 * (i + 1) as f64 * PI).powi(2))
        .sum();
    let tan = w.tan();
    let profile = l * tan * (3.0 + kap) / 2.0 + kap / (2.0 * z);

    let jump_sq = c.c_tau * l / w.cos() * s;
    let l2_sq = l * profile * s;
    let gradx_sq = weighted / l * profile;
    let grady_sq = s * l * z * kap / 2.0;
    let mass_excess = p.m * p.m - c.eps_tau * c.eps_tau;
    let form_gap = gradx_sq + grady_sq + mass_excess * l2_sq + 2.0 * p.m / p.tau * jump_sq;
    let nn = n_modes * n_modes * PI * PI;
    let bound_gap = s
        * (tan * (3.0 + kap) * (2.0 * nn + p.m * p.m * l * l)
            + 4.0 * p.m * l * p.tau / (4.0 + p.tau * p.tau)
            + 2.0 * nn * kap / (l * z));
    EnergyBreakdown {
        jump_sq,
        l2_sq,
        gradx_sq,
        grady_sq,
        form_gap,
        bound_gap,
    }
}
