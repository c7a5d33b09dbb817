use thiserror::Error;

/// Errors raised by state construction, dynamics and the verification oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Gaussian state: {0}")]
    InvalidState(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("relative entropy is negative ({0:e}) beyond rounding tolerance")]
    NegativeDivergence(f64),

    #[error("evolution time must be non-negative, got {0}")]
    NegativeTime(f64),

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("integrator step overflow: {steps} steps requested, limit is {limit}")]
    StepOverflow { steps: u64, limit: u64 },

    #[error(
        "Fock cutoff {cutoff} is too small: population {tail:e} above level {level} \
         exceeds {threshold:e}"
    )]
    CutoffTooSmall {
        cutoff: usize,
        level: usize,
        tail: f64,
        threshold: f64,
    },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
