use thiserror::Error;

/// Errors raised by the library.
///
/// Mathematical verdicts (a failed Gibbs bound, a specification counterexample) are
/// never reported through this type; they live in the corresponding report structs.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("resource budget exceeded: {0}")]
    Resource(String),

    #[error("model inconsistency: {0}")]
    Consistency(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("matrix is reducible: {0}")]
    Reducible(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
