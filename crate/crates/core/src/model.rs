//! Physical parameters, Pauli matrices and transmission matrices.

use std::f64::consts::FRAC_PI_2;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

pub type Mat2 = Matrix2<C64>;

/// Distance from the excluded strengths {-2, 0, 2} below which parameters are rejected.
pub const TAU_EXCLUSION: f64 = 1e-9;
/// Smallest admissible half opening angle.
pub const OMEGA_MIN: f64 = 1e-6;

/// Interaction strength `tau`, mass `m` and half opening angle `omega` (radians).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysParams {
    pub tau: f64,
    pub m: f64,
    pub omega: f64,
}

impl PhysParams {
    /// Validates and builds a parameter triple. `omega = pi/2` (straight line) is accepted
    /// here; operations that need a genuine corner call [`PhysParams::require_corner`].
    pub fn new(tau: f64, m: f64, omega: f64) -> Result<Self> {
        validate_tau(tau)?;
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::InvalidParameter {
                name: "m",
                value: m,
                reason: "mass must be positive".into(),
            });
        }
        if !(omega.is_finite() && omega > OMEGA_MIN && omega <= FRAC_PI_2 + 1e-15) {
            return Err(Error::InvalidParameter {
                name: "omega",
                value: omega,
                reason: format!("half opening angle must lie in ({OMEGA_MIN}, pi/2]"),
            });
        }
        Ok(Self {
            tau,
            m,
            omega: omega.min(FRAC_PI_2),
        })
    }

    pub fn is_straight(&self) -> bool {
        self.omega >= FRAC_PI_2
    }

    pub fn require_corner(&self) -> Result<()> {
        if self.is_straight() {
            return Err(Error::InvalidParameter {
                name: "omega",
                value: self.omega,
                reason: "a corner (omega < pi/2) is required".into(),
            });
        }
        Ok(())
    }

    pub fn require_attractive(&self) -> Result<()> {
        if self.tau > 0.0 {
            return Err(Error::Regime(format!("tau < 0 (got tau = {})", self.tau)));
        }
        Ok(())
    }

    pub fn constants(&self) -> DerivedConstants {
        derived_constants(self)
    }
}

pub(crate) fn validate_tau(tau: f64) -> Result<()> {
    if !tau.is_finite() {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: tau,
            reason: "must be finite".into(),
        });
    }
    for excluded in [-2.0, 0.0, 2.0] {
        if (tau - excluded).abs() < TAU_EXCLUSION {
            return Err(Error::InvalidParameter {
                name: "tau",
                value: tau,
                reason: format!("too close to the excluded value {excluded}"),
            });
        }
    }
    Ok(())
}

/// Scalars built from `(tau, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    pub a: f64,
    pub b: f64,
    /// Edge of the essential spectrum.
    pub eps_tau: f64,
    /// Decay rate `-4 m tau / (4 + tau^2)`; positive for attractive coupling.
    pub kappa0: f64,
    /// `a^2 + b^2`
    pub kappa_tau: f64,
    /// `(a - 1)^2 + b^2`
    pub c_tau: f64,
}

pub fn derived_constants(p: &PhysParams) -> DerivedConstants {
    let t = p.tau;
    let t2 = t * t;
    let a = (4.0 + t2) / (4.0 - t2);
    let b = 4.0 * t / (4.0 - t2);
    let eps_tau = if t > 0.0 {
        p.m
    } else {
        p.m * (t2 - 4.0).abs() / (t2 + 4.0)
    };
    let kappa0 = -4.0 * p.m * t / (4.0 + t2);
    let kappa_tau = ((4.0 + t2).powi(2) + 16.0 * t2) / (4.0 - t2).powi(2);
    let c_tau = 4.0 * t2 * (t2 + 4.0) / (t2 - 4.0).powi(2);
    DerivedConstants {
        a,
        b,
        eps_tau,
        kappa0,
        kappa_tau,
        c_tau,
    }
}

pub fn pauli(j: usize) -> Result<Mat2> {
    let o = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match j {
        0 => Ok(Mat2::new(one, o, o, one)),
        1 => Ok(Mat2::new(o, one, one, o)),
        2 => Ok(Mat2::new(o, -i, i, o)),
        3 => Ok(Mat2::new(one, o, o, -one)),
        _ => Err(Error::PauliIndex(j)),
    }
}

pub(crate) fn sigma(j: usize) -> Mat2 {
    pauli(j).expect("index in range")
}

/// `sigma . v = v1 sigma_1 + v2 sigma_2`
pub fn sigma_dot(v: [f64; 2]) -> Mat2 {
    sigma(1) * C64::from(v[0]) + sigma(2) * C64::from(v[1])
}

/// Normal of the upper ray `Gamma_l`, pointing out of the wedge.
pub fn normal_left(omega: f64) -> [f64; 2] {
    [-omega.sin(), omega.cos()]
}

/// Normal of the lower ray `Gamma_r`, pointing out of the wedge.
pub fn normal_right(omega: f64) -> [f64; 2] {
    [-omega.sin(), -omega.cos()]
}

/// A 2x2 matrix `a + b i sigma_3 (sigma . nu)` together with the normal it was built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionMatrix {
    pub entries: Mat2,
    pub normal: Option<[f64; 2]>,
}

impl TransmissionMatrix {
    pub fn det(&self) -> C64 {
        self.entries.determinant()
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        let e = &self.entries;
        [e[(0, 0)] * v[0] + e[(0, 1)] * v[1], e[(1, 0)] * v[0] + e[(1, 1)] * v[1]]
    }
}

fn check_unit(nu: [f64; 2]) -> Result<()> {
    let len = nu[0].hypot(nu[1]);
    if !((len - 1.0).abs() <= 1e-12) {
        return Err(Error::NonUnitNormal(len));
    }
    Ok(())
}

fn build(a: f64, b: f64, nu: [f64; 2]) -> Mat2 {
    let coupling = sigma(3) * sigma_dot(nu) * C64::new(0.0, 1.0);
    sigma(0) * C64::from(a) + coupling * C64::from(b)
}

/// `M(nu) = a sigma_0 + b i sigma_3 (sigma . nu)`.
pub fn transmission_matrix(p: &PhysParams, nu: [f64; 2]) -> Result<TransmissionMatrix> {
    check_unit(nu)?;
    let c = derived_constants(p);
    Ok(TransmissionMatrix {
        entries: build(c.a, c.b, nu),
        normal: Some(nu),
    })
}

/// `M(nu)^{-1}`, the same construction with `b` replaced by `-b`.
pub fn transmission_matrix_inverse(p: &PhysParams, nu: [f64; 2]) -> Result<TransmissionMatrix> {
    check_unit(nu)?;
    let c = derived_constants(p);
    Ok(TransmissionMatrix {
        entries: build(c.a, -c.b, nu),
        normal: Some(nu),
    })
}

/// Transmission matrix across `Gamma_l`: `u_- = M_l u_+`.
pub fn m_left(p: &PhysParams) -> TransmissionMatrix {
    transmission_matrix(p, normal_left(p.omega)).expect("unit normal")
}

/// Transmission matrix across `Gamma_r`: `u_- = M_r u_+`.
pub fn m_right(p: &PhysParams) -> TransmissionMatrix {
    transmission_matrix(p, normal_right(p.omega)).expect("unit normal")
}

/// Returns `(M_tilde, Theta)` with `Theta = (sigma_0 + i sigma . nu)/sqrt 2` and
/// `Theta^* M(nu) Theta = M_tilde = a sigma_0 - b sigma_3`.
pub fn special_matrices(p: &PhysParams, nu: [f64; 2]) -> Result<(TransmissionMatrix, Mat2)> {
    check_unit(nu)?;
    let c = derived_constants(p);
    let theta = (sigma(0) + sigma_dot(nu) * C64::new(0.0, 1.0)) * C64::from(std::f64::consts::FRAC_1_SQRT_2);
    let m_tilde = sigma(0) * C64::from(c.a) - sigma(3) * C64::from(c.b);
    Ok((
        TransmissionMatrix {
            entries: m_tilde,
            normal: None,
        },
        theta,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn max_abs(m: &Mat2) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn pauli_basics() {
        let s3 = pauli(3).unwrap();
        assert_eq!(s3[(0, 0)], C64::new(1.0, 0.0));
        assert_eq!(s3[(1, 1)], C64::new(-1.0, 0.0));
        assert!(pauli(4).is_err());
        let (s1, s2) = (sigma(1), sigma(2));
        assert!(max_abs(&(s1 * s2 + s2 * s1)) == 0.0);
        assert!(max_abs(&(s1 * s2 - s3 * C64::new(0.0, 1.0))) == 0.0);
    }

    #[test]
    fn constants_tau_minus_one() {
        let p = PhysParams::new(-1.0, 1.0, PI / 4.0).unwrap();
        let c = p.constants();
        assert!((c.a - 5.0 / 3.0).abs() < 1e-15);
        assert!((c.b + 4.0 / 3.0).abs() < 1e-15);
        assert!((c.eps_tau - 0.6).abs() < 1e-15);
        assert!((c.kappa0 - 0.8).abs() < 1e-15);
        assert!((c.kappa_tau - 41.0 / 9.0).abs() < 1e-14);
        assert!((c.c_tau - 20.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn eps_tau_small_coupling_limit() {
        let p = PhysParams::new(-1e-6, 2.0, 0.3).unwrap();
        assert!((p.constants().eps_tau - 2.0).abs() < 1e-11);
    }

    #[test]
    fn validation() {
        assert!(PhysParams::new(2.0, 1.0, 0.5).is_err());
        assert!(PhysParams::new(-2.0 + 1e-10, 1.0, 0.5).is_err());
        assert!(PhysParams::new(0.0, 1.0, 0.5).is_err());
        assert!(PhysParams::new(1.0, 0.0, 0.5).is_err());
        assert!(PhysParams::new(1.0, 1.0, 0.0).is_err());
        assert!(PhysParams::new(1.0, 1.0, 1.6).is_err());
        assert!(PhysParams::new(1.0, 1.0, FRAC_PI_2).unwrap().is_straight());
        assert!(PhysParams::new(1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn left_matrix_entries() {
        let w = PI / 4.0;
        let p = PhysParams::new(-1.0, 1.0, w).unwrap();
        let ml = m_left(&p).entries;
        let e = |s: f64| C64::from_polar(1.0, s);
        let want = Mat2::new(
            C64::from(5.0 / 3.0),
            e(-w) * (-4.0 / 3.0),
            e(w) * (-4.0 / 3.0),
            C64::from(5.0 / 3.0),
        );
        assert!(max_abs(&(ml - want)) < 1e-15);
    }

    #[test]
    fn non_unit_normal_rejected() {
        let p = PhysParams::new(-1.0, 1.0, 0.5).unwrap();
        assert!(matches!(
            transmission_matrix(&p, [1.0, 1.0]),
            Err(Error::NonUnitNormal(_))
        ));
    }

    #[test]
    fn m_tilde_for_tau_minus_one() {
        let p = PhysParams::new(-1.0, 1.0, 0.5).unwrap();
        let (mt, _) = special_matrices(&p, normal_left(0.5)).unwrap();
        let want = Mat2::new(C64::from(3.0), C64::from(0.0), C64::from(0.0), C64::from(1.0 / 3.0));
        assert!(max_abs(&(mt.entries - want)) < 1e-15);
    }
}
