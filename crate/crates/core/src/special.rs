//! Modified Bessel functions of the second kind and the deficiency elements `v_+-`.

use crate::model::PhysParams;
use crate::quad::adaptive_simpson;
use crate::spin_orbit::{principal_eigenvalue, SpinOrbitRoot};
use crate::{Error, Result, C64};

pub const MAX_ORDER: f64 = 5.0;

/// `K_nu(x)` for real `|nu| <= 5`, `x > 0`, from
/// `K_nu(x) = e^{-x} int_0^inf e^{-x (cosh t - 1)} cosh(nu t) dt`.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::BesselArgument(x));
    }
    if !(nu.abs() <= MAX_ORDER) {
        return Err(Error::BesselOrder(nu));
    }
    let nu = nu.abs();
    Ok((-x).exp() * scaled_integral(nu, x))
}

fn log_integrand(nu: f64, x: f64, t: f64) -> f64 {
    -x * (t.cosh() - 1.0) + nu * t
}

fn scaled_integral(nu: f64, x: f64) -> f64 {
    let t_peak = (nu / x).asinh();
    let peak = log_integrand(nu, x, t_peak);
    // Beyond t_max the integrand is below e^{-40} of its peak and falling super-exponentially.
    let drop = |t: f64| log_integrand(nu, x, t) < peak - 40.0;
    let mut lo = t_peak;
    let mut step = 1.0;
    let mut hi = t_peak + step;
    while !drop(hi) {
        lo = hi;
        step *= 2.0;
        hi += step;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if drop(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let t_max = hi;
    let f = |t: f64| (-x * (t.cosh() - 1.0)).exp() * (nu * t).cosh();
    // Panel the range so the first pass sees the peak, then refine adaptively.
    let panels = 16;
    let h = t_max / panels as f64;
    let rough: f64 = (0..panels)
        .map(|i| {
            let a = i as f64 * h;
            h / 6.0 * (f(a) + 4.0 * f(a + 0.5 * h) + f(a + h))
        })
        .sum();
    let tol = 1e-13 * rough.abs().max(f64::MIN_POSITIVE) / panels as f64;
    (0..panels)
        .map(|i| {
            let a = i as f64 * h;
            adaptive_simpson(&f, a, a + h, tol, 48)
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Evaluator for `v_+-(r, theta) = K_{lambda - 1/2}(r) phi(theta)
/// +- K_{lambda + 1/2}(r) (sigma_1 cos theta + sigma_2 sin theta) phi(theta)`
/// with `lambda` the principal spin-orbit eigenvalue and `phi` its eigenfunction.
#[derive(Debug, Clone)]
pub struct DeficiencyElements {
    pub params: PhysParams,
    pub root: SpinOrbitRoot,
}

impl DeficiencyElements {
    pub fn new(p: &PhysParams) -> Result<Self> {
        Ok(Self {
            params: *p,
            root: principal_eigenvalue(p)?,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.root.lambda
    }

    pub fn eval(&self, sign: Sign, r: f64, theta: f64) -> Result<[C64; 2]> {
        let l = self.root.lambda;
        let k_lo = bessel_k(l - 0.5, r)?;
        let k_hi = bessel_k(l + 0.5, r)?;
        let phi = self.root.eigenfunction(&self.params, theta);
        // (sigma . e_r) phi
        let rot = [
            C64::from_polar(1.0, -theta) * phi[1],
            C64::from_polar(1.0, theta) * phi[0],
        ];
        let s = sign.value() * k_hi;
        Ok([phi[0] * k_lo + rot[0] * s, phi[1] * k_lo + rot[1] * s])
    }
}

/// One-shot evaluation of `v_+-`; prefer [`DeficiencyElements`] for many points.
pub fn deficiency_element(p: &PhysParams, sign: Sign, r: f64, theta: f64) -> Result<[C64; 2]> {
    if !(r > 0.0) {
        return Err(Error::BesselArgument(r));
    }
    DeficiencyElements::new(p)?.eval(sign, r, theta)
}
