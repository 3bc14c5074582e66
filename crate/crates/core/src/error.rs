//! Shared error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, TsamError>;

#[derive(Debug, Error)]
pub enum TsamError {
    #[error("empty sample set")]
    EmptySampleSet,

    #[error("non-finite loss")]
    NonFiniteLoss,

    #[error("non-finite gradient at step {step}")]
    NonFiniteGradient { step: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("bound precondition violated: {0}")]
    BoundPrecondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("too many non-finite probe losses: {excluded} of {total} excluded")]
    TooManyExcluded { excluded: usize, total: usize },

    #[error("config error:\n{}", .0.join("\n"))]
    Config(Vec<String>),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl TsamError {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        TsamError::Io {
            path: path.into(),
            source,
        }
    }
}
