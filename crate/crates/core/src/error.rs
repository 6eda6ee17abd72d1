use thiserror::Error;

pub type Result<T> = std::result::Result<T, DiracError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiracError {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },

    /// The matrix is singular or too ill-conditioned to invert reliably.
    #[error("numeric error: {message} (condition estimate {condition:e})")]
    IllConditioned { message: String, condition: f64 },

    #[error("numeric error: {0}")]
    Numeric(String),
}

impl DiracError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        DiracError::Domain(msg.into())
    }
}
