use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: String,
    },

    #[error("Pauli index {0} out of range 0..=3")]
    PauliIndex(usize),

    #[error("normal vector has length {0}, expected 1")]
    NonUnitNormal(f64),

    #[error("operation requires {0}")]
    Regime(String),

    #[error("no secular root bracketed in ({lo}, {hi}); smallest |det| {min_abs_det:e} at lambda = {argmin}")]
    NoRootFound {
        lo: f64,
        hi: f64,
        argmin: f64,
        min_abs_det: f64,
        /// Coarse `(lambda, det)` samples of the scan.
        trace: Vec<(f64, f64)>,
    },

    #[error("expected one secular root in ({lo}, {hi}), found {}", roots.len())]
    AmbiguousRoot { lo: f64, hi: f64, roots: Vec<f64> },

    #[error("Bessel argument must be positive, got {0}")]
    BesselArgument(f64),

    #[error("Bessel order {0} outside supported range |nu| <= 5")]
    BesselOrder(f64),

    #[error("bracket failure: f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("maximum of omega(L) not bracketed; samples (L, omega): {trace:?}")]
    Optimization { trace: Vec<(f64, f64)> },

    #[error("cut-off support intersects the interface (n = {0})")]
    SupportCollision(u32),
}
