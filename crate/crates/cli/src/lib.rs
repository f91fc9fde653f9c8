//! Command-line front end: flag and config-file parsing, subcommand dispatch and JSON/CSV
//! emission. The binary `dshell` is a thin wrapper around [`run`].

pub mod args;
pub mod commands;
pub mod config;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use config::{parse_angle, parse_config, Angle, AngleError, MeshConfig, RunConfig, Subcommand};

/// Environment variable holding the worker count.
pub const THREADS_ENV: &str = "DSHELL_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("solver failed: {0}")]
    NoConvergence(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::NoConvergence(_) => EXIT_NO_CONVERGENCE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<dshell_core::Error> for CliError {
    fn from(e: dshell_core::Error) -> Self {
        use dshell_core::Error as E;
        match e {
            E::NoRootFound { .. } | E::AmbiguousRoot { .. } | E::Bracket { .. } | E::Optimization { .. } => {
                CliError::NoConvergence(e.to_string())
            }
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<dshell_fem::FemError> for CliError {
    fn from(e: dshell_fem::FemError) -> Self {
        use dshell_fem::FemError as E;
        match e {
            E::Core(c) => c.into(),
            E::Io(io) => CliError::Io(io.to_string()),
            E::FactorizationBreakdown { .. } | E::NonConvergence { .. } => CliError::NoConvergence(e.to_string()),
            E::InvalidOption { .. } | E::DegenerateGeometry { .. } | E::MatrixMarket { .. } => {
                CliError::Invalid(e.to_string())
            }
        }
    }
}

/// Files produced by a command. Nothing is written until the command has succeeded.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Artifacts {
    /// Main report, sent to `--output` or standard output.
    pub report: String,
    pub files: Vec<(std::path::PathBuf, String)>,
    /// Set when the report was written but some points failed to converge.
    pub partial_failure: Option<String>,
    /// Messages for the diagnostic stream.
    pub diagnostics: Vec<String>,
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli) {
        Ok((art, output)) => {
            for d in &art.diagnostics {
                let _ = writeln!(stderr, "dshell: {d}");
            }
            if let Err(e) = emit(&art, output.as_deref(), stdout) {
                let _ = writeln!(stderr, "dshell: {e}");
                return e.exit_code();
            }
            match art.partial_failure {
                Some(msg) => {
                    let _ = writeln!(stderr, "dshell: {msg}");
                    EXIT_NO_CONVERGENCE
                }
                None => EXIT_OK,
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "dshell: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: args::Cli) -> Result<(Artifacts, Option<std::path::PathBuf>), CliError> {
    let file = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            parse_config(&text)?
        }
        None => RunConfig::default(),
    };
    let (sub, flags) = cli.command.into_config();
    let mut cfg = file.merge(flags);
    if sub.is_some() {
        cfg.command = sub;
    }
    if cli.output.is_some() {
        cfg.output = cli.output;
    }
    if cli.threads.is_some() {
        cfg.threads = cli.threads;
    }
    let cmd = cfg
        .command
        .ok_or_else(|| CliError::Invalid("`run` needs a config file with a `command` field".into()))?;
    let threads = match cfg.threads {
        Some(t) => Some(t),
        None => threads_from_env()?,
    };
    let output = cfg.output.clone();
    let resolved = commands::resolve(cmd, &cfg)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        if t == 0 {
            return Err(CliError::Invalid("thread count must be positive".into()));
        }
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| CliError::Io(e.to_string()))?;
    let art = pool.install(|| commands::execute(cmd, &resolved))?;
    Ok((art, output))
}

fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(s) if !s.trim().is_empty() => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Invalid(format!("{THREADS_ENV} = {s:?} is not a thread count"))),
        _ => Ok(None),
    }
}

fn emit(art: &Artifacts, output: Option<&std::path::Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let io = |p: &std::path::Path, e: std::io::Error| CliError::Io(format!("{}: {e}", p.display()));
    for (path, text) in &art.files {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        }
        std::fs::write(path, text).map_err(|e| io(path, e))?;
    }
    match output {
        Some(p) => std::fs::write(p, &art.report).map_err(|e| io(p, e)),
        None => stdout
            .write_all(art.report.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}
