use thiserror::Error;

use crate::two_photon::Stage;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Amplitude would leave the truncated OAM window.
    #[error("OAM window [{min}, {max}] too small: amplitude {amplitude:e} would land at m = {m}")]
    WindowOverflow {
        min: i64,
        max: i64,
        m: i64,
        amplitude: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("detection efficiency is zero (or missing) at m = {m}")]
    ZeroEfficiency { m: i64 },

    #[error("expected a {expected:?} distribution, got {found:?}")]
    StageError { expected: Stage, found: Stage },

    #[error("argument outside the function domain: {0}")]
    DomainError(String),

    #[error("quadrature did not converge: estimated error {error:e} after {intervals} subintervals")]
    QuadratureFailure { error: f64, intervals: usize },

    #[error("distribution has no nonzero entries")]
    EmptyDistribution,

    #[error("no nonzero counts in the cells needed for {0}")]
    InsufficientCounts(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("negative count at line {line}")]
    NegativeCount { line: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// Whether the error stems from the user's configuration rather than the computation.
    pub fn is_config_error(&self) -> bool {
        matches!(self, Error::Config(_) | Error::InvalidParameter(_))
    }
}
