use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RfeError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Doubling the quadrature order moved the result by more than the
    /// self-consistency tolerance.
    #[error("quadrature accuracy check failed: {value} vs {refined} (tolerance {tolerance:e})")]
    Accuracy { value: f64, refined: f64, tolerance: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, RfeError>;

pub(crate) fn invalid(msg: impl Into<String>) -> RfeError {
    RfeError::InvalidArgument(msg.into())
}
