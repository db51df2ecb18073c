use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An input violates a documented precondition (normalization, unitarity, ...).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Two algebraically equivalent evaluations disagree.
    #[error("internal consistency check failed: {what} (|difference| = {difference:e})")]
    Consistency { what: String, difference: f64 },

    /// A series or iteration did not reach its target accuracy.
    #[error("no convergence after {iterations} iterations (partial value {partial}, remainder bound {remainder:e})")]
    Convergence { iterations: usize, partial: f64, remainder: f64 },

    #[error("linear algebra failure: {0}")]
    LinAlg(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
