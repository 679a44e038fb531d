use thiserror::Error;

use crate::semiring::SemiringId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("mixed semirings: {0} and {1}")]
    MixedSemirings(SemiringId, SemiringId),

    #[error("`{literal}` is not a valid {semiring} coefficient")]
    InvalidCoefficient { literal: String, semiring: SemiringId },

    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("operation requires a positive semiring, got {0}")]
    PositivityRequired(SemiringId),

    #[error("invalid reduction trace: {0}")]
    InvalidTrace(String),

    #[error("invalid reduction step: {0}")]
    InvalidStep(String),

    #[error("invalid derivation at {path}: {reason}")]
    InvalidDerivation { path: String, reason: String },

    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn step(msg: impl Into<String>) -> Self {
        Error::InvalidStep(msg.into())
    }
}
