//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    /// A constructor or operation received arguments outside its contract.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Problem data violates a well-posedness constraint. The message names
    /// the constraint so the CLI can surface it verbatim.
    #[error("validation failed: {0}")]
    Validation(String),

    /// The boundary quadrature could not meet its truncation-tail bound.
    #[error("quadrature tail bound violated: estimated tail {estimated:.3e} exceeds {bound:.3e}")]
    QuadratureTail { estimated: f64, bound: f64 },

    /// The Picard iteration failed to contract within the allowed iterations
    /// and time-halvings. Carries the ratio history for diagnostics.
    #[error("fixed-point iteration did not converge (last ratio {last_ratio:.3e}); \
             the local time may be too large for the data size")]
    NonConvergence { last_ratio: f64, ratios: Vec<f64> },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
