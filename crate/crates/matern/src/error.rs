use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of a function.
    #[error("{func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// Evaluation at a point where the quantity is infinite.
    #[error("{0}: singular at this argument")]
    Singular(&'static str),

    /// Parameters violate a model invariant.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Cholesky factorization met a nonpositive pivot.
    #[error("covariance matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    /// Two inputs that must agree in length do not.
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// A configuration that cannot be honored.
    #[error("configuration error: {0}")]
    Config(String),

    /// Input data that carries no usable information.
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        func,
        detail: detail.into(),
    }
}
