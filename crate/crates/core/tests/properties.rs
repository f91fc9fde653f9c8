use std::f64::consts::PI;

use dshell_core::aux1d::{ground_state, secular_f};
use dshell_core::model::{m_left, m_right};
use dshell_core::variational::{critical_angle_closed, energy_breakdown, TestFunctionFamily};
use dshell_core::{PhysParams, C64};
use dshell_oracles::identities::identity_residuals;
use proptest::prelude::*;

fn tau_strategy() -> impl Strategy<Value = f64> {
    prop_oneof![-10.0..-2.1f64, -1.9..-0.01f64, 0.01..1.9f64, 2.1..10.0f64]
}

proptest! {
    #[test]
    fn transmission_identities(tau in tau_strategy(), omega in 1e-3..(PI / 2.0 - 1e-3), m in 0.1..5.0f64) {
        let p = PhysParams::new(tau, m, omega).unwrap();
        for (name, r) in identity_residuals(&p) {
            prop_assert!(r < 1e-14, "{} residual {}", name, r);
        }
    }

    #[test]
    fn left_right_mirror(tau in tau_strategy(), omega in 1e-3..(PI / 2.0)) {
        // reflection y -> -y maps one ray to the other: M_r = conj(M_l)^T up to the sign of b
        let p = PhysParams::new(tau, 1.0, omega).unwrap();
        let l = m_left(&p).entries;
        let r = m_right(&p).entries;
        prop_assert!((l[(0, 0)] - r[(0, 0)]).norm() < 1e-15 * l.norm());
        prop_assert!((l[(0, 1)] + r[(1, 0)]).norm() < 1e-15 * l.norm());
    }

    #[test]
    fn secular_function_monotone(k1 in 0.0..20.0f64, dk in 1e-6..5.0f64, gamma in 0.01..50.0f64) {
        prop_assert!(secular_f(k1 + dk, gamma) > secular_f(k1, gamma));
    }

    #[test]
    fn ground_energy_below_mass(tau in -10.0..-0.05f64, m in 0.2..3.0f64, gamma in 0.05..60.0f64) {
        prop_assume!((tau + 2.0).abs() > 0.05);
        let p = PhysParams::new(tau, m, 0.5).unwrap();
        let r = ground_state(&p, gamma).unwrap();
        prop_assert!(r.e_gamma < m * m);
        // equality only once tanh(k gamma) rounds to 1
        prop_assert!(r.k_gamma >= p.constants().kappa0);
        prop_assert!((secular_f(r.k_gamma, gamma) - p.constants().kappa0).abs() < 1e-12 * (1.0 + r.k_gamma));
    }

    #[test]
    fn form_gap_grows_with_angle(tau in -5.0..-0.1f64, w1 in 1e-4..0.5f64, dw in 1e-4..0.5f64, l in 1.0..200.0f64) {
        prop_assume!((tau + 2.0).abs() > 0.05);
        let gap = |w: f64| {
            let p = PhysParams::new(tau, 1.0, w).unwrap();
            energy_breakdown(&TestFunctionFamily::unit(p, l, 1).unwrap()).bound_gap
        };
        prop_assert!(gap(w1 + dw) > gap(w1));
    }

    #[test]
    fn energy_is_quadratic(tau in -5.0..-0.1f64, re in -3.0..3.0f64, im in -3.0..3.0f64) {
        prop_assume!((tau + 2.0).abs() > 0.05 && re.hypot(im) > 1e-3);
        let p = PhysParams::new(tau, 1.0, 0.01).unwrap();
        let base = energy_breakdown(&TestFunctionFamily::unit(p, 10.0, 2).unwrap());
        let c = C64::new(re, im);
        let scaled = energy_breakdown(&TestFunctionFamily::new(p, 10.0, vec![c, c]).unwrap());
        let s = c.norm_sqr();
        prop_assert!((scaled.form_gap - s * base.form_gap).abs() <= 1e-12 * s * base.form_gap.abs().max(1.0));
    }

    #[test]
    fn critical_angle_shrinks_with_modes(tau in -20.0..-0.01f64) {
        prop_assume!((tau + 2.0).abs() > 0.01);
        let w1 = critical_angle_closed(tau, 1).unwrap();
        let w2 = critical_angle_closed(tau, 2).unwrap();
        prop_assert!(w1 > 0.0 && w2 > 0.0 && w2 < w1);
    }
}
