use std::f64::consts::PI;

use dshell_core::PhysParams;
use dshell_fem::eigen::RESIDUAL_BOUND;
use dshell_fem::*;

const J01: f64 = 2.404_825_557_695_773;

fn disk(radius: f64, h: f64) -> MeshOptions {
    MeshOptions {
        radius,
        h,
        layout: Layout::Disk,
        ..MeshOptions::default()
    }
}

fn lowest(p: &PhysParams, mesh: &Mesh, k: usize) -> Eigenpairs {
    let pencil = assemble(p, mesh).unwrap();
    let e = solve_lowest(&pencil, k, -0.1 * p.m * p.m, &SolverOptions::default()).unwrap();
    assert!(e.residuals.iter().all(|&r| r <= RESIDUAL_BOUND));
    e
}

#[test]
fn uncoupled_disk_matches_bessel_zero() {
    let p = PhysParams::new(-1.0, 1.0, PI / 4.0).unwrap();
    let radius = 2.0;
    let mesh = build_mesh(&p, &disk(radius, 0.08)).unwrap();
    let pencil = assemble_with(&p, &mesh, false).unwrap();
    let e = solve_lowest(&pencil, 2, -0.1, &SolverOptions::default()).unwrap();
    let exact = 1.0 + (J01 / radius).powi(2);
    for v in &e.values {
        assert!((v - exact).abs() < 0.02 * exact, "{v} vs {exact}");
    }
}

#[test]
fn ritz_values_decrease_under_refinement() {
    let p = PhysParams::new(-1.0, 1.0, PI / 3.0).unwrap();
    let m0 = build_mesh(&p, &disk(3.0, 0.75)).unwrap();
    let m1 = refine(&m0);
    let m2 = refine(&m1);
    let e: Vec<Eigenpairs> = [&m0, &m1, &m2].iter().map(|m| lowest(&p, m, 4)).collect();
    for w in e.windows(2) {
        for (fine, coarse) in w[1].values.iter().zip(&w[0].values) {
            assert!(*fine <= coarse + 1e-10, "{fine} > {coarse}");
        }
    }
}

#[test]
fn repulsive_coupling_stays_above_mass() {
    for &w in &[PI / 4.0, 0.2, PI / 2.0] {
        let p = PhysParams::new(1.0, 1.0, w).unwrap();
        let mesh = build_mesh(&p, &disk(4.0, 0.4)).unwrap();
        let e = lowest(&p, &mesh, 2);
        assert!(e.values[0] >= 1.0 - 1e-10, "omega {w}: {}", e.values[0]);
    }
}

#[test]
fn straight_line_has_nothing_below_the_edge() {
    let p = PhysParams::new(-1.0, 1.0, PI / 2.0).unwrap();
    let opts = CountOptions {
        mesh: disk(6.0, 0.5),
        k: 3,
        ..CountOptions::default()
    };
    let r = count_bound_states(&p, &opts).unwrap();
    assert_eq!(r.count_below, 0);
    assert!((r.gap_edge - 0.36).abs() < 1e-15);
    assert!(r.eigenvalues[0] > 0.36);
}

#[test]
fn thin_wedge_strip_finds_a_bound_state() {
    let p = PhysParams::new(-1.0, 1.0, 3.2e-3).unwrap();
    let l = dshell_core::variational::critical_length_closed(&p, 1).unwrap();
    let opts = CountOptions {
        mesh: MeshOptions {
            radius: 3.0 * l,
            h: 0.6,
            ..MeshOptions::default()
        },
        k: 2,
        ..CountOptions::default()
    };
    let r = count_bound_states(&p, &opts).unwrap();
    assert_eq!(r.mesh.layout, Layout::Strip);
    assert!(r.count_below >= 1, "{r:?}");
    assert!(r.margin >= 1e-6 * r.gap_edge);
    assert!(r.coarse_mesh.unknowns < r.mesh.unknowns);
}

#[test]
fn neumann_mode_runs_and_sits_below_dirichlet() {
    let p = PhysParams::new(-1.0, 1.0, PI / 4.0).unwrap();
    let d = build_mesh(&p, &disk(3.0, 0.5)).unwrap();
    let n = build_mesh(
        &p,
        &MeshOptions {
            bc: BoundaryCondition::Neumann,
            ..disk(3.0, 0.5)
        },
    )
    .unwrap();
    let ed = lowest(&p, &d, 1);
    let en = lowest(&p, &n, 1);
    assert!(en.values[0] < ed.values[0]);
}

#[test]
fn assembly_does_not_depend_on_thread_count() {
    let p = PhysParams::new(-1.0, 1.0, 0.7).unwrap();
    let mesh = build_mesh(&p, &disk(8.0, 0.2)).unwrap();
    assert!(mesh.triangles.len() > 10_000);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| assemble(&p, &mesh).unwrap())
    };
    let (a, b) = (run(1), run(3));
    assert_eq!(a.a, b.a);
    assert_eq!(a.b, b.b);
}

#[test]
fn matrix_market_export_round_trips() {
    let p = PhysParams::new(-1.0, 1.0, 0.7).unwrap();
    let mesh = build_mesh(&p, &disk(2.0, 0.5)).unwrap();
    let pencil = assemble(&p, &mesh).unwrap();
    let mut buf = Vec::new();
    mm::write(&pencil.a, &mut buf).unwrap();
    let parsed = mm::parse(std::str::from_utf8(&buf).unwrap()).unwrap();
    assert_eq!(parsed.n, pencil.dim());
    for (r, c, v) in parsed.entries {
        assert_eq!(pencil.a.get(r, c), v);
    }
}

#[test]
fn straight_line_ritz_values_approach_the_edge_from_above() {
    let p = PhysParams::new(-1.0, 1.0, PI / 2.0).unwrap();
    let coarse = lowest(&p, &build_mesh(&p, &disk(8.0, 0.8)).unwrap(), 1).values[0];
    let big = lowest(&p, &build_mesh(&p, &disk(16.0, 0.8)).unwrap(), 1).values[0];
    assert!(0.36 < big && big < coarse, "{big} {coarse}");
}
