use thiserror::Error;

/// Errors shared across the numerical layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature exhausted its subdivision budget. The partial
    /// estimate and its error bound are reported so callers can decide
    /// whether the result is still usable.
    #[error("quadrature did not converge: estimate {value} ± {error_estimate} after {evaluations} evaluations")]
    QuadratureNoConvergence {
        value: f64,
        error_estimate: f64,
        evaluations: u64,
    },

    /// Bisection was called on a bracket without a sign change.
    #[error("bisection bracket [{lo}, {hi}] has no sign change")]
    NoSignChange { lo: f64, hi: f64 },

    /// An iterative special-function evaluation failed to converge.
    #[error("{0} failed to converge")]
    NoConvergence(&'static str),

    /// A stochastic estimator could not produce a usable result.
    #[error("estimator failure: {0}")]
    Estimator(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
