use thiserror::Error;

/// Errors raised by the denoiser, oracles and optimizers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("block count mismatch: expected {expected} blocks, found {found}")]
    BlockCount { expected: usize, found: usize },

    #[error("Lipschitz constant must be positive and finite, got {0}")]
    NonPositiveLipschitz(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("query points {0} and {1} coincide")]
    CoincidentPoints(usize, usize),

    #[error("index {index} out of range for {len} examples")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("no example has arrived yet")]
    NoArrivals,

    #[error("optimizer `{0}` requires a finite-sum oracle")]
    NeedsFiniteSum(&'static str),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("did not converge: {0}")]
    NotConverged(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}
