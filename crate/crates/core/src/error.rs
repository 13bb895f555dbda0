//! Crate-wide error type.

/// Errors surfaced by the library.
///
/// `Verification` is reserved for mathematical invariants that failed at
/// runtime: reaching it means either the input violated a theorem hypothesis
/// or the implementation has a bug, never statistical noise.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("law is not psi_{alpha}: {detail}")]
    NotPsiAlpha { alpha: f64, detail: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("no convergence after {iterations} iterations (best value {value}, residual {residual})")]
    Convergence {
        value: f64,
        residual: f64,
        iterations: usize,
    },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("calibration failed: {0}")]
    Calibration(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
