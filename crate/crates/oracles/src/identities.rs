//! Residuals of the algebraic identities satisfied by the transmission matrices, each scaled
//! by the size of the matrices involved.

use dshell_core::model::{m_left, m_right, normal_left, pauli, special_matrices, transmission_matrix_inverse};
use dshell_core::PhysParams;
use nalgebra::Matrix2;
use num_complex::Complex64 as C64;

fn max_abs(m: &Matrix2<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `(name, residual / scale)` for every identity.
pub fn identity_residuals(p: &PhysParams) -> Vec<(&'static str, f64)> {
    let s0 = pauli(0).unwrap();
    let s3 = pauli(3).unwrap();
    let c = p.constants();
    let ml = m_left(p).entries;
    let mr = m_right(p).entries;
    let scale = max_abs(&ml).max(1.0);
    let mut out = Vec::new();
    for m in [ml, mr] {
        out.push((
            "det M = 1",
            (m.determinant() - C64::new(1.0, 0.0)).norm() / (scale * scale),
        ));
        out.push(("M = M*", max_abs(&(m - m.adjoint())) / scale));
        let inv = s3 * m * s3;
        out.push(("s3 M s3 = M^-1", max_abs(&(inv * m - s0)) / (scale * scale)));
    }
    let nu = normal_left(p.omega);
    let minv = transmission_matrix_inverse(p, nu).unwrap().entries;
    out.push(("inverse", max_abs(&(minv * ml - s0)) / (scale * scale)));
    let (mt, theta) = special_matrices(p, nu).unwrap();
    out.push(("Theta unitary", max_abs(&(theta.adjoint() * theta - s0))));
    out.push((
        "Theta* M Theta = M~",
        max_abs(&(theta.adjoint() * ml * theta - mt.entries)) / scale,
    ));
    let t = p.tau;
    let k = 8.0 * p.m * t / (4.0 - t * t);
    let lhs = (ml * ml + s0) * C64::from(c.kappa0);
    let rhs = ml * C64::from(-k);
    out.push((
        "z (M^2 + 1) = -k M",
        max_abs(&(lhs - rhs)) / (scale * scale * c.kappa0.abs().max(1.0)),
    ));
    let d = s0 - ml;
    let lhs = d * d * C64::from(2.0 * p.m / t);
    let rhs = ml * C64::from(k);
    out.push((
        "(2m/tau)(1 - M)^2 = k M",
        max_abs(&(lhs - rhs)) / (scale * scale * (2.0 * p.m / t).abs().max(1.0)),
    ));
    out
}
