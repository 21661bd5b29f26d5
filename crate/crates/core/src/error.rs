use thiserror::Error;

/// Errors produced by the numerical core and the drivers.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration value violated a type invariant; the string names the key path.
    #[error("validation error at `{path}`: {message}")]
    Validation { path: String, message: String },

    /// Two structures that must share a time grid do not.
    #[error("time grid mismatch: {0}")]
    GridMismatch(String),

    /// The fringe carries no contrast information (all points equal).
    #[error("undefined visibility: {0}")]
    UndefinedVisibility(String),

    /// Density matrix with zero trace.
    #[error("degenerate state: trace normalizer P = 0")]
    DegenerateState,

    /// Emission density integrates to zero; no inverse-CDF sample exists.
    #[error("degenerate emission density: total intensity is zero")]
    DegenerateDensity,

    /// Measured count fractions imply a negative occupation probability.
    #[error("inconsistent counts: {0}")]
    InconsistentCounts(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Process exit code for the CLI: 1 validation, 2 runtime, 3 i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation { .. } | Error::Domain(_) | Error::GridMismatch(_) => 1,
            Error::Io(_) => 3,
            _ => 2,
        }
    }
}
