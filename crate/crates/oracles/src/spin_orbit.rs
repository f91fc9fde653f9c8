//! Reference spectrum of the spin-orbit operator from a conforming cubic finite-element
//! discretization of `q[phi] = |J phi|^2` on the two arcs. The matching conditions at
//! `theta = omega` and `theta = 2 pi - omega` are imposed by eliminating the outer-arc end
//! values. Each `|lambda|` shows up twice (once for `lambda`, once for `-lambda`).

use std::f64::consts::PI;

use dshell_core::model::{m_left, m_right, PhysParams};
use num_complex::Complex64 as C64;

use crate::band::{eigenvalues_below, BandHermitian};

const GL4_X: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_3,
    0.339_981_043_584_856_3,
    0.861_136_311_594_052_6,
];
const GL4_W: [f64; 4] = [
    0.347_854_845_137_453_9,
    0.652_145_154_862_546_1,
    0.652_145_154_862_546_1,
    0.347_854_845_137_453_9,
];

/// Cubic Lagrange basis on `[0, 1]` with nodes `0, 1/3, 2/3, 1`: values and derivatives.
fn basis(t: f64) -> ([f64; 4], [f64; 4]) {
    let nodes = [0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0];
    let mut v = [0.0; 4];
    let mut d = [0.0; 4];
    for i in 0..4 {
        let mut denom = 1.0;
        for j in 0..4 {
            if j != i {
                denom *= nodes[i] - nodes[j];
            }
        }
        let mut prod = 1.0;
        let mut deriv = 0.0;
        for j in 0..4 {
            if j == i {
                continue;
            }
            let mut term = 1.0;
            for k in 0..4 {
                if k != i && k != j {
                    term *= t - nodes[k];
                }
            }
            deriv += term;
            prod *= t - nodes[j];
        }
        v[i] = prod / denom;
        d[i] = deriv / denom;
    }
    (v, d)
}

/// Reference matrices on an element of length `h`: stiffness, mass and `C_ij = int psi_i psi_j'`.
type Local = [[f64; 4]; 4];

fn element(h: f64) -> (Local, Local, Local) {
    let mut k = [[0.0; 4]; 4];
    let mut m = [[0.0; 4]; 4];
    let mut c = [[0.0; 4]; 4];
    for (x, w) in GL4_X.iter().zip(GL4_W) {
        let t = 0.5 * (x + 1.0);
        let (v, d) = basis(t);
        let wt = 0.5 * w;
        for i in 0..4 {
            for j in 0..4 {
                k[i][j] += wt * d[i] * d[j] / h;
                m[i][j] += wt * v[i] * v[j] * h;
                c[i][j] += wt * v[i] * d[j];
            }
        }
    }
    (k, m, c)
}

/// Sorted `|lambda|` values below `max_abs` (each listed with its multiplicity in the
/// spectrum of `J^2`), from at least `min_nodes` grid nodes.
pub fn abs_spectrum(p: &PhysParams, max_abs: f64, min_nodes: usize) -> Vec<f64> {
    let w = p.omega;
    let total_len = 2.0 * PI;
    let n_el = min_nodes.div_ceil(3) + 1;
    let n_in = ((n_el as f64 * 2.0 * w / total_len).round() as usize).max(2);
    let n_out = (n_el - n_in).max(2);
    let nodes_in = 3 * n_in + 1;
    let nodes_out = 3 * n_out + 1;
    // Masters: inner-arc nodes 0..nodes_in, then the interior outer-arc nodes. The cycle of
    // masters is closed through the two transmission conditions.
    let cycle = nodes_in + nodes_out - 2;
    let mut pos = vec![0usize; cycle];
    let mut order = Vec::with_capacity(cycle);
    order.push(0);
    let (mut a, mut b) = (1usize, cycle - 1);
    while a <= b {
        order.push(a);
        if a != b {
            order.push(b);
        }
        a += 1;
        b -= 1;
    }
    for (k, &q) in order.iter().enumerate() {
        pos[q] = k;
    }
    let n = 2 * cycle;
    let bw = 16;
    let mut am = BandHermitian::zeros(n, bw);
    let mut bm = BandHermitian::zeros(n, bw);

    let ml = m_left(p).entries;
    let mr = m_right(p).entries;
    let eye = dshell_core::model::pauli(0).expect("identity");
    // (master, 2x2 map from master DOFs to this node's values)
    let outer_node = |i: usize| -> (usize, nalgebra::Matrix2<C64>) {
        if i == 0 {
            (nodes_in - 1, ml)
        } else if i == nodes_out - 1 {
            (0, mr)
        } else {
            (nodes_in + i - 1, eye)
        }
    };
    let inner_node = |i: usize| -> (usize, nalgebra::Matrix2<C64>) { (i, eye) };

    let mut assemble_arc = |n_elem: usize, length: f64, node: &dyn Fn(usize) -> (usize, nalgebra::Matrix2<C64>)| {
        let h = length / n_elem as f64;
        let (k, m, c) = element(h);
        for e in 0..n_elem {
            let loc: Vec<(usize, nalgebra::Matrix2<C64>)> = (0..4).map(|a| node(3 * e + a)).collect();
            for i in 0..4 {
                for j in 0..4 {
                    for comp in 0..2 {
                        // component 0 carries -i d/dtheta, component 1 carries +i d/dtheta
                        let s = if comp == 0 { 1.0 } else { -1.0 };
                        let form = C64::new(k[i][j] + 0.25 * m[i][j], 0.5 * s * (c[j][i] - c[i][j]));
                        let mass = m[i][j];
                        let (mi, ti) = loc[i];
                        let (mj, tj) = loc[j];
                        for ri in 0..2 {
                            for rj in 0..2 {
                                let coef = ti[(comp, ri)].conj() * tj[(comp, rj)];
                                if coef == C64::new(0.0, 0.0) {
                                    continue;
                                }
                                let gi = 2 * pos[mi] + ri;
                                let gj = 2 * pos[mj] + rj;
                                if gj <= gi {
                                    am.add(gi, gj, form * coef);
                                    bm.add(gi, gj, coef * mass);
                                }
                            }
                        }
                    }
                }
            }
        }
    };
    assemble_arc(n_in, 2.0 * w, &inner_node);
    assemble_arc(n_out, total_len - 2.0 * w, &outer_node);

    let squares = eigenvalues_below(&am, &bm, max_abs * max_abs, 1e-13);
    squares.iter().map(|s| s.max(0.0).sqrt()).collect()
}
