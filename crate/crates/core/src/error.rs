//! Crate-wide error type.

/// Errors produced by parameter validation and the numerical solvers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An input lies outside its physical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A linear system was singular or numerically unsolvable.
    #[error("singular system: {0}")]
    Singular(String),

    /// An iterative solver ran out of iterations.
    #[error("solver did not converge: {reason} (residual history: {history:?})")]
    NonConvergence { reason: String, history: Vec<f64> },

    /// An operator failed a structural invariant (hermiticity, trace, dimension).
    #[error("operator invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn singular(msg: impl Into<String>) -> Self {
        Error::Singular(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
