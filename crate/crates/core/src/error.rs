use thiserror::Error;

/// Errors surfaced by the algebra, module, and analysis layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("evaluation point is a root of the denominator")]
    PoleAtEvaluation,
    #[error("value not representable in exact mode: {0}")]
    NotRepresentable(String),
    #[error("operation requires numeric mode: {0}")]
    NumericOnly(&'static str),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
