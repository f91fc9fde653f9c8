//! Direct two-dimensional quadrature of the test-function energies, evaluating `u` and its
//! derivatives pointwise.

use std::f64::consts::PI;

use dshell_core::model::{m_left, m_right, PhysParams};
use dshell_core::quad::gl_nodes;
use num_complex::Complex64 as C64;

#[derive(Debug, Clone, Copy)]
pub struct QuadratureEnergy {
    pub jump_sq: f64,
    pub l2_sq: f64,
    pub gradx_sq: f64,
    pub grady_sq: f64,
    pub form_gap: f64,
}

pub fn energy_by_quadrature(p: &PhysParams, length: f64, coeffs: &[C64]) -> QuadratureEnergy {
    let c = p.constants();
    let z = c.kappa0;
    let l = length;
    let tan = p.omega.tan();
    let d = l * tan;
    let y_max = 2.0 * d + (1e10f64).ln() / z;
    let upper = m_left(p).apply([C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
    let lower = m_right(p).apply([C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
    let inner = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];

    let f = |x: f64| -> (C64, C64) {
        let mut v = C64::new(0.0, 0.0);
        let mut dv = C64::new(0.0, 0.0);
        for (k, ck) in coeffs.iter().enumerate() {
            let q = 2.0 * (k + 1) as f64 * PI / l;
            v += ck * (q * x).sin();
            dv += ck * q * (q * x).cos();
        }
        (v, dv)
    };
    let g = |y: f64| -> (f64, f64) {
        let a = y.abs();
        if a <= 2.0 * d {
            (1.0, 0.0)
        } else {
            let e = (-z * (a - 2.0 * d)).exp();
            (e, -z * y.signum() * e)
        }
    };
    let spinor_sq = |y: f64, x: f64| -> f64 {
        let h = if y > x * tan {
            upper
        } else if y < -x * tan {
            lower
        } else {
            inner
        };
        h[0].norm_sqr() + h[1].norm_sqr()
    };

    let x_cells = 16 * coeffs.len().max(1);
    let (mut l2, mut gx, mut gy) = (0.0, 0.0, 0.0);
    gl_nodes(l, 2.0 * l, x_cells, |x, wx| {
        let (fv, fd) = f(x);
        let w = x * tan;
        let breaks = [-y_max, -2.0 * d, -w, 0.0, w, 2.0 * d, y_max];
        for seg in breaks.windows(2) {
            let (a, b) = (seg[0], seg[1]);
            if b <= a {
                continue;
            }
            let cells = if (b - a) > 1.0 {
                ((b - a) * z * 2.0).ceil() as usize + 4
            } else {
                2
            };
            gl_nodes(a, b, cells, |y, wy| {
                let (gv, gd) = g(y);
                let s = spinor_sq(y, x);
                let wt = wx * wy;
                l2 += wt * fv.norm_sqr() * gv * gv * s;
                gx += wt * fd.norm_sqr() * gv * gv * s;
                gy += wt * fv.norm_sqr() * gd * gd * s;
            });
        }
    });

    // Jump along both rays, parametrized by arclength.
    let mut jump = 0.0;
    let co = p.omega.cos();
    for (side, sgn) in [(upper, 1.0), (lower, -1.0)] {
        gl_nodes(l / co, 2.0 * l / co, x_cells, |s, ws| {
            let x = s * co;
            let y = sgn * s * p.omega.sin();
            let (fv, _) = f(x);
            let (gv, _) = g(y);
            let amp = fv * gv;
            let diff = [(inner[0] - side[0]) * amp, (inner[1] - side[1]) * amp];
            jump += ws * (diff[0].norm_sqr() + diff[1].norm_sqr());
        });
    }
    let form_gap = gx + gy + (p.m * p.m - c.eps_tau * c.eps_tau) * l2 + 2.0 * p.m / p.tau * jump;
    QuadratureEnergy {
        jump_sq: jump,
        l2_sq: l2,
        gradx_sq: gx,
        grady_sq: gy,
        form_gap,
    }
}
