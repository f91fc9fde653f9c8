//! Command-line flags. Every flag maps onto a [`RunConfig`] field and overrides the value
//! from `--config`.

use std::path::PathBuf;

use clap::{Args, Parser};
use dshell_fem::{BoundaryCondition, Layout};

use crate::config::{parse_angle, parse_grid, parse_number, Angle, MeshConfig, RunConfig, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "dshell",
    version,
    about = "Spectral tools for the Dirac operator with a broken-line interaction"
)]
pub struct Cli {
    /// JSON config file; flags override its values
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of standard output
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads (default: DSHELL_THREADS, then all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Subcommand)]
pub enum Command {
    /// Edge of the essential spectrum and derived constants (JSON)
    Gap(GapArgs),
    /// Spin-orbit eigenvalues in a window (CSV)
    SpinOrbit(SpinOrbitArgs),
    /// Critical angle and strip length per tau and N (CSV)
    CriticalAngle(CriticalArgs),
    /// Energy breakdown of the test-function family (JSON)
    Testfn(TestfnArgs),
    /// Ground state of the one-dimensional strip model (CSV)
    Aux1d(Aux1dArgs),
    /// Weyl sequence residuals (CSV)
    Weyl(WeylArgs),
    /// Finite-element bound-state count (JSON)
    FemCount(FemArgs),
    /// Cartesian sweep over tau, omega and N (CSV)
    Sweep(SweepArgs),
    /// Deficiency elements on a polar grid (CSV)
    Deficiency(DeficiencyArgs),
    /// Run the command named in the `--config` file
    Run,
}

/// Wrapper so clap treats a parsed list as one value.
#[derive(Debug, Clone)]
pub struct List<T>(pub Vec<T>);

fn angle(s: &str) -> Result<Angle, String> {
    parse_angle(s).map(Angle).map_err(|e| e.to_string())
}

fn numbers(s: &str) -> Result<Vec<f64>, String> {
    parse_grid(s, parse_number)
}

fn number_list(s: &str) -> Result<List<f64>, String> {
    numbers(s).map(List)
}

fn angle_list(s: &str) -> Result<List<Angle>, String> {
    parse_grid(s, |x| parse_angle(x).map_err(|e| e.to_string())).map(|v| List(v.into_iter().map(Angle).collect()))
}

fn count_list(s: &str) -> Result<List<u32>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|_| format!("not a count: {x:?}")))
        .collect::<Result<_, _>>()
        .map(List)
}

fn window(s: &str) -> Result<[f64; 2], String> {
    match numbers(s)?.as_slice() {
        [lo, hi] => Ok([*lo, *hi]),
        _ => Err(format!("window {s:?} needs two numbers lo,hi")),
    }
}

/// `re:im` pairs separated by commas; a bare number is real.
fn coefficients(s: &str) -> Result<List<[f64; 2]>, String> {
    s.split(',')
        .map(|c| {
            let mut it = c.split(':');
            let re = parse_number(it.next().unwrap_or("").trim())?;
            let im = match it.next() {
                Some(x) => parse_number(x.trim())?,
                None => 0.0,
            };
            if it.next().is_some() {
                return Err(format!("coefficient {c:?} is not re:im"));
            }
            Ok([re, im])
        })
        .collect::<Result<_, _>>()
        .map(List)
}

#[derive(Debug, Clone, Args)]
pub struct Coupling {
    /// Coupling constant tau (tau != +-2)
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<f64>,
    /// Mass m > 0
    #[arg(long)]
    pub m: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct Wedge {
    #[command(flatten)]
    pub coupling: Coupling,
    /// Half opening angle in radians, or with a `deg` suffix
    #[arg(long, allow_hyphen_values = true, value_parser = angle)]
    pub omega: Option<Angle>,
}

#[derive(Debug, Args)]
pub struct GapArgs {
    #[command(flatten)]
    pub coupling: Coupling,
}

#[derive(Debug, Args)]
pub struct SpinOrbitArgs {
    #[command(flatten)]
    pub wedge: Wedge,
    /// Spectral window lo,hi
    #[arg(long, allow_hyphen_values = true, value_parser = window)]
    pub window: Option<[f64; 2]>,
}

#[derive(Debug, Args)]
pub struct CriticalArgs {
    #[command(flatten)]
    pub coupling: Coupling,
    /// List or start:stop:count of tau values; replaces --tau
    #[arg(long, allow_hyphen_values = true, value_parser = number_list)]
    pub tau_grid: Option<List<f64>>,
    /// Numbers of modes, comma separated
    #[arg(long = "N", alias = "modes", value_parser = count_list)]
    pub modes: Option<List<u32>>,
}

#[derive(Debug, Args)]
pub struct TestfnArgs {
    #[command(flatten)]
    pub wedge: Wedge,
    /// Number of modes
    #[arg(long = "N", alias = "modes", value_parser = count_list)]
    pub modes: Option<List<u32>>,
    /// Strip parameter L (default: the optimal one)
    #[arg(long)]
    pub length: Option<f64>,
    /// Mode coefficients as re:im pairs, comma separated (default: all ones)
    #[arg(long, allow_hyphen_values = true, value_parser = coefficients)]
    pub coefficients: Option<List<[f64; 2]>>,
}

#[derive(Debug, Args)]
pub struct Aux1dArgs {
    #[command(flatten)]
    pub coupling: Coupling,
    /// Strip half-widths gamma, list or start:stop:count
    #[arg(long, value_parser = number_list)]
    pub gamma: Option<List<f64>>,
}

#[derive(Debug, Args)]
pub struct WeylArgs {
    #[command(flatten)]
    pub wedge: Wedge,
    /// Spectral parameter, |lambda| >= eps_tau
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Sequence indices, comma separated
    #[arg(long, value_parser = count_list)]
    pub n: Option<List<u32>>,
}

#[derive(Debug, Args)]
pub struct FemArgs {
    #[command(flatten)]
    pub wedge: Wedge,
    /// Outer radius of the computational domain
    #[arg(long)]
    pub radius: Option<f64>,
    /// Mesh spacing away from the corner
    #[arg(long)]
    pub h: Option<f64>,
    /// Corner grading in [0, 1)
    #[arg(long)]
    pub grading: Option<f64>,
    #[arg(long, value_enum)]
    pub bc: Option<BcArg>,
    #[arg(long, value_enum)]
    pub layout: Option<LayoutArg>,
    /// Number of Ritz values
    #[arg(long)]
    pub k: Option<usize>,
    /// Shift of the shift-invert iteration (default -0.1 m^2)
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<f64>,
    /// Directory for A.mtx and B.mtx of the fine mesh
    #[arg(long)]
    pub export: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum BcArg {
    Dirichlet,
    Neumann,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum LayoutArg {
    Auto,
    Disk,
    Strip,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Mass m > 0
    #[arg(long)]
    pub m: Option<f64>,
    /// List or start:stop:count of tau values
    #[arg(long, allow_hyphen_values = true, value_parser = number_list)]
    pub tau_grid: Option<List<f64>>,
    /// List or start:stop:count of angles
    #[arg(long, allow_hyphen_values = true, value_parser = angle_list)]
    pub omega_grid: Option<List<Angle>>,
    /// Numbers of modes, comma separated
    #[arg(long = "N", alias = "modes", value_parser = count_list)]
    pub modes: Option<List<u32>>,
}

#[derive(Debug, Args)]
pub struct DeficiencyArgs {
    #[command(flatten)]
    pub wedge: Wedge,
    /// Radii, list or start:stop:count
    #[arg(long, value_parser = number_list)]
    pub radii: Option<List<f64>>,
    /// Polar angles, list or start:stop:count
    #[arg(long, allow_hyphen_values = true, value_parser = angle_list)]
    pub theta: Option<List<Angle>>,
}

impl Coupling {
    fn apply(&self, c: &mut RunConfig) {
        c.tau = self.tau;
        c.m = self.m;
    }
}

impl Wedge {
    fn apply(&self, c: &mut RunConfig) {
        self.coupling.apply(c);
        c.omega = self.omega;
    }
}

impl Command {
    /// The subcommand (`None` for `run`) and the flags as a partial config.
    pub fn into_config(self) -> (Option<Subcommand>, RunConfig) {
        let mut c = RunConfig::default();
        let sub = match self {
            Command::Gap(a) => {
                a.coupling.apply(&mut c);
                Subcommand::Gap
            }
            Command::SpinOrbit(a) => {
                a.wedge.apply(&mut c);
                c.window = a.window;
                Subcommand::SpinOrbit
            }
            Command::CriticalAngle(a) => {
                a.coupling.apply(&mut c);
                c.tau_grid = a.tau_grid.map(|l| l.0);
                c.modes = a.modes.map(|l| l.0);
                Subcommand::CriticalAngle
            }
            Command::Testfn(a) => {
                a.wedge.apply(&mut c);
                c.modes = a.modes.map(|l| l.0);
                c.length = a.length;
                c.coefficients = a.coefficients.map(|l| l.0);
                Subcommand::Testfn
            }
            Command::Aux1d(a) => {
                a.coupling.apply(&mut c);
                c.gamma = a.gamma.map(|l| l.0);
                Subcommand::Aux1d
            }
            Command::Weyl(a) => {
                a.wedge.apply(&mut c);
                c.lambda = a.lambda;
                c.n = a.n.map(|l| l.0);
                Subcommand::Weyl
            }
            Command::FemCount(a) => {
                a.wedge.apply(&mut c);
                let mesh = MeshConfig {
                    radius: a.radius,
                    h: a.h,
                    grading: a.grading,
                    bc: a.bc.map(|b| match b {
                        BcArg::Dirichlet => BoundaryCondition::Dirichlet,
                        BcArg::Neumann => BoundaryCondition::Neumann,
                    }),
                    layout: a.layout.map(|l| match l {
                        LayoutArg::Auto => Layout::Auto,
                        LayoutArg::Disk => Layout::Disk,
                        LayoutArg::Strip => Layout::Strip,
                    }),
                };
                if mesh != MeshConfig::default() {
                    c.mesh = Some(mesh);
                }
                c.k = a.k;
                c.sigma = a.sigma;
                c.export = a.export;
                Subcommand::FemCount
            }
            Command::Sweep(a) => {
                c.m = a.m;
                c.tau_grid = a.tau_grid.map(|l| l.0);
                c.omega_grid = a.omega_grid.map(|l| l.0);
                c.modes = a.modes.map(|l| l.0);
                Subcommand::Sweep
            }
            Command::Deficiency(a) => {
                a.wedge.apply(&mut c);
                c.radii = a.radii.map(|l| l.0);
                c.theta = a.theta.map(|l| l.0);
                Subcommand::Deficiency
            }
            Command::Run => return (None, c),
        };
        (Some(sub), c)
    }
}
