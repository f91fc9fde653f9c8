//! Resolution of defaults and the subcommands themselves. Floats are written with Rust's
//! shortest round-trip formatting, so equal inputs give byte-identical reports.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt::Write as _;

use dshell_core::special::{DeficiencyElements, Sign};
use dshell_core::spin_orbit::{principal_eigenvalue, spectrum_in_window};
use dshell_core::variational::{
    bound_state_certificate, critical_angle_closed, critical_angle_maximize, critical_length_closed, energy_breakdown,
    weyl_eval, TestFunctionFamily,
};
use dshell_core::{aux1d, PhysParams, C64};
use dshell_fem::mesh::STRIP_ANGLE;
use dshell_fem::{assemble, build_mesh, count_bound_states, BoundaryCondition, CountOptions, Layout, MeshOptions};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Angle, MeshConfig, RunConfig, Subcommand};
use crate::{Artifacts, CliError};

const DEFAULT_OMEGA: f64 = FRAC_PI_4;
const DEFAULT_GAMMA: [f64; 5] = [1.0, 2.0, 5.0, 10.0, 20.0];
const DEFAULT_WEYL_N: [u32; 4] = [4, 8, 16, 32];
const DEFAULT_RADII: [f64; 7] = [1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 5.0];
/// Angular samples of the deficiency grid; odd multiples of `pi/16` miss `+-pi/4`.
const DEFAULT_THETA_COUNT: usize = 16;
/// Upper limit on `N`; the test-function family is evaluated mode by mode.
const MAX_MODES: u32 = 64;
/// Upper limit on the number of sweep points.
const MAX_SWEEP_POINTS: usize = 1_000_000;
/// Outer radius of the disk layout.
const DISK_RADIUS: f64 = 10.0;
/// The strip layout reaches this multiple of the optimal strip parameter.
const STRIP_RADIUS_FACTOR: f64 = 3.0;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T, CliError> {
    v.ok_or_else(|| invalid(format!("missing `{name}`")))
}

fn nonempty<T>(v: &[T], name: &str) -> Result<(), CliError> {
    if v.is_empty() {
        return Err(invalid(format!("`{name}` is empty")));
    }
    Ok(())
}

fn check_modes(modes: &[u32]) -> Result<(), CliError> {
    nonempty(modes, "modes")?;
    match modes.iter().find(|&&n| n == 0 || n > MAX_MODES) {
        Some(n) => Err(invalid(format!("mode count {n} outside 1..={MAX_MODES}"))),
        None => Ok(()),
    }
}

fn params(tau: f64, m: f64, omega: f64) -> Result<PhysParams, CliError> {
    Ok(PhysParams::new(tau, m, omega)?)
}

fn strip_layout(layout: Layout, omega: f64) -> bool {
    layout == Layout::Strip || (layout == Layout::Auto && omega < STRIP_ANGLE)
}

/// Fills in every default the command uses and validates the result. The returned config
/// carries only the fields relevant to `cmd`, so it can be embedded and replayed.
pub fn resolve(cmd: Subcommand, c: &RunConfig) -> Result<RunConfig, CliError> {
    let m = c.m.unwrap_or(1.0);
    let mut r = RunConfig {
        command: Some(cmd),
        m: Some(m),
        ..RunConfig::default()
    };
    let omega = c.omega.map_or(DEFAULT_OMEGA, Angle::radians);
    match cmd {
        Subcommand::Gap | Subcommand::Aux1d => {
            let tau = need(c.tau, "tau")?;
            params(tau, m, FRAC_PI_2)?;
            r.tau = Some(tau);
            if cmd == Subcommand::Aux1d {
                let gamma = c.gamma.clone().unwrap_or_else(|| DEFAULT_GAMMA.to_vec());
                nonempty(&gamma, "gamma")?;
                r.gamma = Some(gamma);
            }
        }
        Subcommand::SpinOrbit => {
            let tau = need(c.tau, "tau")?;
            params(tau, m, omega)?.require_corner()?;
            let w = c.window.unwrap_or([-3.0, 3.0]);
            if !(w[0].is_finite() && w[1].is_finite() && w[0] < w[1]) {
                return Err(invalid(format!("window {w:?} must be finite with lo < hi")));
            }
            r.tau = Some(tau);
            r.omega = Some(Angle(omega));
            r.window = Some(w);
        }
        Subcommand::CriticalAngle => {
            let taus = match (&c.tau_grid, c.tau) {
                (Some(g), _) => {
                    r.tau_grid = Some(g.clone());
                    g.clone()
                }
                (None, Some(t)) => {
                    r.tau = Some(t);
                    vec![t]
                }
                (None, None) => return Err(invalid("missing `tau` or `tau_grid`")),
            };
            nonempty(&taus, "tau_grid")?;
            let modes = c.modes.clone().unwrap_or_else(|| vec![1]);
            check_modes(&modes)?;
            for &t in &taus {
                let p = params(t, m, DEFAULT_OMEGA)?;
                p.require_attractive()?;
            }
            r.modes = Some(modes);
        }
        Subcommand::Testfn => {
            let tau = need(c.tau, "tau")?;
            let modes = c.modes.clone().unwrap_or_else(|| vec![1]);
            check_modes(&modes)?;
            let n = match modes.as_slice() {
                [n] => *n,
                _ => return Err(invalid("`testfn` takes a single `modes` value")),
            };
            // default angle: the critical one for this N
            let omega = match c.omega {
                Some(a) => a.radians(),
                None => critical_angle_closed(tau, n)?,
            };
            let p = params(tau, m, omega)?;
            p.require_corner()?;
            let length = match c.length {
                Some(l) => l,
                None => critical_length_closed(&p, n)?,
            };
            let coefficients = c.coefficients.clone().unwrap_or_else(|| vec![[1.0, 0.0]; n as usize]);
            if coefficients.len() != n as usize {
                return Err(invalid(format!(
                    "{} coefficients given for {n} modes",
                    coefficients.len()
                )));
            }
            r.tau = Some(tau);
            r.omega = Some(Angle(omega));
            r.modes = Some(modes);
            r.length = Some(length);
            r.coefficients = Some(coefficients);
        }
        Subcommand::Weyl => {
            let tau = need(c.tau, "tau")?;
            params(tau, m, omega)?;
            let n = c.n.clone().unwrap_or_else(|| DEFAULT_WEYL_N.to_vec());
            nonempty(&n, "n")?;
            if n.contains(&0) {
                return Err(invalid("`n` must be positive"));
            }
            r.tau = Some(tau);
            r.omega = Some(Angle(omega));
            r.lambda = Some(c.lambda.unwrap_or(1.5));
            r.n = Some(n);
        }
        Subcommand::FemCount => {
            let tau = need(c.tau, "tau")?;
            let p = params(tau, m, omega)?;
            let mc = c.mesh.unwrap_or_default();
            let d = MeshOptions::default();
            let layout = mc.layout.unwrap_or(d.layout);
            let radius = match mc.radius {
                Some(v) => v,
                None if strip_layout(layout, omega) && tau < 0.0 => {
                    STRIP_RADIUS_FACTOR * critical_length_closed(&p, 1)?
                }
                None => DISK_RADIUS,
            };
            r.tau = Some(tau);
            r.omega = Some(Angle(omega));
            r.mesh = Some(MeshConfig {
                radius: Some(radius),
                h: Some(mc.h.unwrap_or(d.h)),
                grading: Some(mc.grading.unwrap_or(d.grading)),
                bc: Some(mc.bc.unwrap_or(BoundaryCondition::Dirichlet)),
                layout: Some(layout),
            });
            let k = c.k.unwrap_or(CountOptions::default().k);
            if k == 0 {
                return Err(invalid("`k` must be positive"));
            }
            r.k = Some(k);
            r.sigma = Some(c.sigma.unwrap_or(-0.1 * m * m));
            r.export = c.export.clone();
        }
        Subcommand::Sweep => {
            let taus = c.tau_grid.clone().ok_or_else(|| invalid("missing `tau_grid`"))?;
            let omegas = c.omega_grid.clone().ok_or_else(|| invalid("missing `omega_grid`"))?;
            let modes = c.modes.clone().unwrap_or_else(|| vec![1]);
            nonempty(&taus, "tau_grid")?;
            nonempty(&omegas, "omega_grid")?;
            check_modes(&modes)?;
            let points = taus.len().saturating_mul(omegas.len()).saturating_mul(modes.len());
            if points > MAX_SWEEP_POINTS {
                return Err(invalid(format!("sweep has {points} points, limit {MAX_SWEEP_POINTS}")));
            }
            for &t in &taus {
                for w in &omegas {
                    params(t, m, w.radians())?;
                }
            }
            r.tau_grid = Some(taus);
            r.omega_grid = Some(omegas);
            r.modes = Some(modes);
        }
        Subcommand::Deficiency => {
            let tau = need(c.tau, "tau")?;
            params(tau, m, omega)?.require_corner()?;
            let radii = c.radii.clone().unwrap_or_else(|| DEFAULT_RADII.to_vec());
            nonempty(&radii, "radii")?;
            if let Some(&bad) = radii.iter().find(|&&x| !(x > 0.0 && x.is_finite())) {
                return Err(invalid(format!("radius {bad} must be positive")));
            }
            let theta = c.theta.clone().unwrap_or_else(|| {
                let n = DEFAULT_THETA_COUNT;
                (0..n)
                    .map(|k| Angle(-PI + (k as f64 + 0.5) * 2.0 * PI / n as f64))
                    .collect()
            });
            nonempty(&theta, "theta")?;
            r.tau = Some(tau);
            r.omega = Some(Angle(omega));
            r.radii = Some(radii);
            r.theta = Some(theta);
        }
    }
    Ok(r)
}

/// Shortest representation that parses back to the same bits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

struct Csv(String);

impl Csv {
    fn new(cfg: &RunConfig, header: &[&str]) -> Self {
        let mut s = String::new();
        let _ = writeln!(s, "# config: {}", cfg.to_json());
        s.push_str(&header.join(","));
        s.push('\n');
        Csv(s)
    }

    fn row(&mut self, cells: &[String]) {
        self.0.push_str(&cells.join(","));
        self.0.push('\n');
    }
}

#[derive(Serialize)]
struct Report<'a, T> {
    config: &'a RunConfig,
    result: T,
}

fn json<T: Serialize>(cfg: &RunConfig, result: T) -> String {
    let mut s = serde_json::to_string_pretty(&Report { config: cfg, result }).expect("report serializes");
    s.push('\n');
    s
}

fn report(text: String) -> Artifacts {
    Artifacts {
        report: text,
        ..Artifacts::default()
    }
}

/// Runs a resolved config.
pub fn execute(cmd: Subcommand, c: &RunConfig) -> Result<Artifacts, CliError> {
    let m = c.m.expect("resolved");
    let omega = c.omega.map_or(FRAC_PI_2, Angle::radians);
    match cmd {
        Subcommand::Gap => gap(c, &params(c.tau.expect("resolved"), m, FRAC_PI_2)?),
        Subcommand::SpinOrbit => spin_orbit(c, &params(c.tau.expect("resolved"), m, omega)?),
        Subcommand::CriticalAngle => critical_angle(c, m),
        Subcommand::Testfn => testfn(c, &params(c.tau.expect("resolved"), m, omega)?),
        Subcommand::Aux1d => aux1d_table(c, &params(c.tau.expect("resolved"), m, FRAC_PI_2)?),
        Subcommand::Weyl => weyl(c, &params(c.tau.expect("resolved"), m, omega)?),
        Subcommand::FemCount => fem_count(c, &params(c.tau.expect("resolved"), m, omega)?),
        Subcommand::Sweep => sweep(c, m),
        Subcommand::Deficiency => deficiency(c, &params(c.tau.expect("resolved"), m, omega)?),
    }
}

#[derive(Serialize)]
struct GapResult {
    eps_tau: f64,
    /// `eps_tau^2`, the bottom of the essential spectrum of the squared operator.
    gap_edge: f64,
    attractive: bool,
    constants: dshell_core::DerivedConstants,
}

fn gap(c: &RunConfig, p: &PhysParams) -> Result<Artifacts, CliError> {
    let k = p.constants();
    Ok(report(json(
        c,
        GapResult {
            eps_tau: k.eps_tau,
            gap_edge: k.eps_tau * k.eps_tau,
            attractive: p.tau < 0.0,
            constants: k,
        },
    )))
}

fn spin_orbit(c: &RunConfig, p: &PhysParams) -> Result<Artifacts, CliError> {
    let [lo, hi] = c.window.expect("resolved");
    let roots = spectrum_in_window(p, lo, hi)?;
    let mut csv = Csv::new(c, &["lambda", "multiplicity", "residual"]);
    for r in &roots {
        csv.row(&[fmt_f64(r.lambda), r.multiplicity.to_string(), fmt_f64(r.residual(p))]);
    }
    Ok(report(csv.0))
}

fn critical_angle(c: &RunConfig, m: f64) -> Result<Artifacts, CliError> {
    let taus = c.tau_grid.clone().unwrap_or_else(|| vec![c.tau.expect("resolved")]);
    let modes = c.modes.clone().expect("resolved");
    let points: Vec<(f64, u32)> = taus.iter().flat_map(|&t| modes.iter().map(move |&n| (t, n))).collect();
    let rows: Vec<Result<Vec<String>, CliError>> = points
        .par_iter()
        .map(|&(tau, n)| {
            let omega = critical_angle_closed(tau, n)?;
            let p = params(tau, m, omega)?;
            let length = critical_length_closed(&p, n)?;
            let (w_num, l_num) = critical_angle_maximize(&p, n)?;
            Ok(vec![
                fmt_f64(tau),
                fmt_f64(m),
                n.to_string(),
                fmt_f64(omega),
                fmt_f64(length),
                fmt_f64(w_num),
                fmt_f64(l_num),
            ])
        })
        .collect();
    let mut csv = Csv::new(
        c,
        &[
            "tau",
            "m",
            "modes",
            "omega_star",
            "length_star",
            "omega_numeric",
            "length_numeric",
        ],
    );
    for r in rows {
        csv.row(&r?);
    }
    Ok(report(csv.0))
}

#[derive(Serialize)]
struct TestfnResult {
    breakdown: dshell_core::variational::EnergyBreakdown,
    certificate: dshell_core::variational::Certificate,
}

fn testfn(c: &RunConfig, p: &PhysParams) -> Result<Artifacts, CliError> {
    let n = c.modes.as_ref().expect("resolved")[0];
    let coeffs: Vec<C64> = c
        .coefficients
        .as_ref()
        .expect("resolved")
        .iter()
        .map(|z| C64::new(z[0], z[1]))
        .collect();
    let family = TestFunctionFamily::new(*p, c.length.expect("resolved"), coeffs)?;
    let breakdown = energy_breakdown(&family);
    let certificate = bound_state_certificate(p, n)?;
    Ok(report(json(c, TestfnResult { breakdown, certificate })))
}

fn aux1d_table(c: &RunConfig, p: &PhysParams) -> Result<Artifacts, CliError> {
    let edge = p.constants().eps_tau.powi(2);
    let mut csv = Csv::new(c, &["gamma", "k_gamma", "e_gamma", "gap_minus_e"]);
    for &g in c.gamma.as_ref().expect("resolved") {
        let r = aux1d::ground_state(p, g)?;
        csv.row(&[
            fmt_f64(g),
            fmt_f64(r.k_gamma),
            fmt_f64(r.e_gamma),
            fmt_f64(edge - r.e_gamma),
        ]);
    }
    Ok(report(csv.0))
}

fn weyl(c: &RunConfig, p: &PhysParams) -> Result<Artifacts, CliError> {
    let lambda = c.lambda.expect("resolved");
    let ns = c.n.clone().expect("resolved");
    let evals: Vec<_> = ns.par_iter().map(|&n| weyl_eval(p, lambda, n)).collect();
    let mut csv = Csv::new(c, &["n", "norm_sq", "residual", "ratio"]);
    let mut prev: Option<f64> = None;
    for (n, e) in ns.iter().zip(evals) {
        let e = e?;
        let res = e.residual_sq.sqrt();
        csv.row(&[
            n.to_string(),
            fmt_f64(e.norm_sq),
            fmt_f64(res),
            opt(prev.map(|q| res / q)),
        ]);
        prev = Some(res);
    }
    Ok(report(csv.0))
}

fn fem_count(c: &RunConfig, p: &PhysParams) -> Result<Artifacts, CliError> {
    let mc = c.mesh.expect("resolved");
    let mesh = MeshOptions {
        radius: mc.radius.expect("resolved"),
        h: mc.h.expect("resolved"),
        grading: mc.grading.expect("resolved"),
        bc: mc.bc.expect("resolved"),
        layout: mc.layout.expect("resolved"),
    };
    let opts = CountOptions {
        mesh,
        k: c.k.expect("resolved"),
        sigma: c.sigma,
        ..CountOptions::default()
    };
    let spectral = count_bound_states(p, &opts)?;
    let mut art = report(json(c, &spectral));
    if let Some(dir) = &c.export {
        let pencil = assemble(p, &build_mesh(p, &mesh)?)?;
        art.files
            .push((dir.join("A.mtx"), dshell_fem::mm::to_string(&pencil.a)));
        art.files
            .push((dir.join("B.mtx"), dshell_fem::mm::to_string(&pencil.b)));
    }
    Ok(art)
}

/// One sweep point. Quantities that do not apply (a critical angle for repulsive coupling,
/// a spin-orbit root on a straight line) are left empty.
fn sweep_point(tau: f64, m: f64, omega: f64, n: u32) -> Result<Vec<String>, CliError> {
    let p = params(tau, m, omega)?;
    let eps = p.constants().eps_tau;
    let lambda = if p.is_straight() {
        None
    } else {
        Some(principal_eigenvalue(&p)?.lambda)
    };
    let (mut w_star, mut l_star, mut gap, mut certified) = (None, None, None, String::new());
    if tau < 0.0 {
        w_star = Some(critical_angle_closed(tau, n)?);
        if !p.is_straight() {
            let cert = bound_state_certificate(&p, n)?;
            l_star = Some(cert.length);
            gap = cert.per_mode.iter().map(|e| e.form_gap).reduce(f64::max);
            certified = cert.certified.to_string();
        }
    }
    Ok(vec![
        fmt_f64(tau),
        fmt_f64(omega),
        n.to_string(),
        fmt_f64(eps),
        opt(lambda),
        opt(w_star),
        opt(l_star),
        opt(gap),
        certified,
    ])
}

fn sweep(c: &RunConfig, m: f64) -> Result<Artifacts, CliError> {
    let taus = c.tau_grid.as_ref().expect("resolved");
    let omegas = c.omega_grid.as_ref().expect("resolved");
    let modes = c.modes.as_ref().expect("resolved");
    let mut points = Vec::with_capacity(taus.len() * omegas.len() * modes.len());
    for &t in taus {
        for w in omegas {
            for &n in modes {
                points.push((t, w.radians(), n));
            }
        }
    }
    let rows: Vec<_> = points.par_iter().map(|&(t, w, n)| sweep_point(t, m, w, n)).collect();
    let header = [
        "tau",
        "omega",
        "modes",
        "eps_tau",
        "lambda_star",
        "omega_star",
        "length_star",
        "form_gap",
        "certified",
        "status",
    ];
    let mut csv = Csv::new(c, &header);
    let mut failures = Vec::new();
    for ((t, w, n), row) in points.iter().zip(rows) {
        match row {
            Ok(mut cells) => {
                cells.push("ok".into());
                csv.row(&cells);
            }
            Err(e @ CliError::NoConvergence(_)) => {
                failures.push(format!("sweep point tau = {t}, omega = {w}, N = {n}: {e}"));
                let mut cells = vec![fmt_f64(*t), fmt_f64(*w), n.to_string()];
                cells.resize(header.len() - 1, String::new());
                cells.push("failed".into());
                csv.row(&cells);
            }
            Err(e) => return Err(e),
        }
    }
    let mut art = report(csv.0);
    if !failures.is_empty() {
        art.partial_failure = Some(format!("{} of {} sweep points failed", failures.len(), points.len()));
        art.diagnostics = failures;
    }
    Ok(art)
}

fn deficiency(c: &RunConfig, p: &PhysParams) -> Result<Artifacts, CliError> {
    let elems = DeficiencyElements::new(p)?;
    let radii = c.radii.as_ref().expect("resolved");
    let theta = c.theta.as_ref().expect("resolved");
    let mut csv = Csv::new(c, &["r", "theta", "sign", "re_u", "im_u", "re_v", "im_v"]);
    for &r in radii {
        for t in theta {
            for (sign, label) in [(Sign::Plus, "+"), (Sign::Minus, "-")] {
                let v = elems.eval(sign, r, t.radians())?;
                csv.row(&[
                    fmt_f64(r),
                    fmt_f64(t.radians()),
                    label.to_string(),
                    fmt_f64(v[0].re),
                    fmt_f64(v[0].im),
                    fmt_f64(v[1].re),
                    fmt_f64(v[1].im),
                ]);
            }
        }
    }
    Ok(report(csv.0))
}
