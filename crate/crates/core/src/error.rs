use thiserror::Error;

/// Errors produced while parsing presentations or running the engines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid presentation: {0}")]
    Validation(String),

    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),

    /// The resolution engine only runs on quadratic presentations; a
    /// relation of higher degree is a definitive non-Koszulity witness.
    #[error("relation of degree {degree}: the algebra is not quadratic")]
    NonQuadratic { degree: usize },

    #[error("size limit exceeded: {0}")]
    LimitExceeded(String),

    #[error("subspaces live in different ambient bases")]
    AmbientMismatch,

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
