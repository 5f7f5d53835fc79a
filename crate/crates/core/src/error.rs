use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("invalid letter: {0}")]
    InvalidLetter(String),

    #[error("operands belong to different presentation graphs")]
    GraphMismatch,

    #[error("index {index} out of range for word of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("word is not geodesic")]
    NotGeodesic,

    #[error("resource limit exceeded: {what} (cap {cap})")]
    ResourceLimit { what: &'static str, cap: usize },

    #[error("horizon {horizon} is smaller than 2r = {needed}")]
    HorizonTooSmall { horizon: usize, needed: usize },

    #[error("position {needed} exceeds the ray horizon {horizon}")]
    HorizonExceeded { horizon: usize, needed: usize },

    #[error("rays coincide up to horizon {0}")]
    RaysIndistinguishable(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
