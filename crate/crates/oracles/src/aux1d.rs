//! Linear finite elements for the one-dimensional interface form on `(-gamma, gamma)`,
//! per component of the diagonal transmission matrix, with `f(0-)` eliminated.

use dshell_core::model::{normal_left, special_matrices, PhysParams};
use num_complex::Complex64 as C64;

use crate::band::{eigenvalues_below, BandHermitian};

/// Lowest eigenvalue for the scalar constraint `f(0-) = mu f(0+)` with `n` elements per side.
fn lowest_component(p: &PhysParams, gamma: f64, mu: f64, n: usize) -> f64 {
    let h = gamma / n as f64;
    let m2 = p.m * p.m;
    // unknowns: left nodes -gamma..-h (n of them), f(0+), right nodes h..gamma (n of them)
    let size = 2 * n + 1;
    let mut a = BandHermitian::zeros(size, 1);
    let mut b = BandHermitian::zeros(size, 1);
    let kloc = [[1.0 / h, -1.0 / h], [-1.0 / h, 1.0 / h]];
    let mloc = [[h / 3.0, h / 6.0], [h / 6.0, h / 3.0]];
    // (index, factor) of the two element ends
    let mut elems: Vec<[(usize, f64); 2]> = Vec::with_capacity(2 * n);
    for e in 0..n - 1 {
        elems.push([(e, 1.0), (e + 1, 1.0)]);
    }
    elems.push([(n - 1, 1.0), (n, mu)]);
    for e in 0..n {
        elems.push([(n + e, 1.0), (n + e + 1, 1.0)]);
    }
    for el in &elems {
        for i in 0..2 {
            for j in 0..2 {
                let (gi, fi) = el[i];
                let (gj, fj) = el[j];
                if gj <= gi {
                    a.add(gi, gj, C64::new(fi * fj * (kloc[i][j] + m2 * mloc[i][j]), 0.0));
                    b.add(gi, gj, C64::new(fi * fj * mloc[i][j], 0.0));
                }
            }
        }
    }
    a.add(n, n, C64::new(2.0 * p.m / p.tau * (1.0 - mu).powi(2), 0.0));
    // shift to make the pencil non-negative for the bisection window
    let shift = 4.0 * m2 + (2.0 * p.m / p.tau).abs() * (1.0 - mu).powi(2) * 4.0 / h;
    for i in 0..size {
        let bii = b.get(i, i);
        a.add(i, i, bii * shift);
        for j in i.saturating_sub(1)..i {
            let bij = b.get(i, j);
            a.add(i, j, bij * shift);
        }
    }
    let ev = eigenvalues_below(&a, &b, shift + m2, 1e-14);
    ev[0] - shift
}

/// Ground-state energy of the interface form, minimum over both components.
pub fn ground_energy(p: &PhysParams, gamma: f64, n_per_side: usize) -> f64 {
    let (mt, _) = special_matrices(p, normal_left(p.omega)).expect("unit normal");
    (0..2)
        .map(|j| lowest_component(p, gamma, mt.entries[(j, j)].re, n_per_side))
        .fold(f64::INFINITY, f64::min)
}

/// Richardson extrapolation of two linear-element runs (error ~ h^2).
pub fn ground_energy_extrapolated(p: &PhysParams, gamma: f64, n_per_side: usize) -> f64 {
    let coarse = ground_energy(p, gamma, n_per_side);
    let fine = ground_energy(p, gamma, 2 * n_per_side);
    (4.0 * fine - coarse) / 3.0
}
