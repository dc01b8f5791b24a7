use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (relative deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("integration failure at step {step}: {reason}")]
    IntegrationFailure { step: usize, reason: String },

    #[error("step size too large at step {step}: norm drift {drift:.3e}")]
    StepSize { step: usize, drift: f64 },

    #[error("divergence at step {step}: raw norm {norm:.3e}")]
    Divergence { step: usize, norm: f64 },

    #[error("pole of the decay rate near t = {t}")]
    Pole { t: f64 },

    #[error("degenerate spectrum at node {node}: levels {lower} and {upper} separated by {gap:.3e}")]
    Degeneracy {
        node: usize,
        lower: usize,
        upper: usize,
        gap: f64,
    },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
