use thiserror::Error;

/// Errors for rejected preconditions across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid probability {0}: must lie in [0, 1]")]
    InvalidProbability(f64),
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("transform needs {required} output symbols, exceeding the cap of {cap}")]
    AlphabetCapExceeded { required: usize, cap: usize },
    #[error("level {n} exceeds the exhaustive enumeration guard of {max}")]
    LevelTooLarge { n: usize, max: usize },
    #[error("index range ({m}, {n}] invalid for a path of length {len}")]
    InvalidIndexRange { m: usize, n: usize, len: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("rate {rate} exceeds capacity: must lie in (0, {capacity})")]
    RateExceedsCapacity { rate: f64, capacity: f64 },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("kernel rows are linearly dependent over GF(2)")]
    SingularKernel,
}
