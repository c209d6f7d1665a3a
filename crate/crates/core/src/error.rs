//! Error type shared across the crate.

use thiserror::Error;

/// Failures surfaced by the statistical and training routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input combination for which the underlying formula is undefined
    /// (0/0, divergent support bound, and similar).
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),

    /// A parameter outside its documented domain.
    #[error("invalid parameter {name}: {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    /// A log-space intermediate left the representable range; the result
    /// would be meaningless, so it is signaled instead of silently zeroed.
    #[error("numerical underflow in {0}")]
    NumericalUnderflow(&'static str),

    /// A prediction batch with zero elements.
    #[error("empty batch")]
    EmptyBatch,

    /// A dataset with zero rows.
    #[error("empty dataset")]
    EmptyDataset,

    /// Feature width does not match what the consumer expects.
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    /// A tank fill height outside the physical range of the geometry.
    #[error("fill height {height} outside [0, {max}]")]
    HeightOutOfRange { height: f64, max: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
