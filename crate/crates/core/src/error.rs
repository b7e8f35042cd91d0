use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("block length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("free-bit count {k} out of range 1..={n}")]
    InvalidK { n: usize, k: usize },
    #[error("design parameter z0 = {0} must lie in (0, 1)")]
    InvalidDesignZ(f64),
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("list size must be at least 1")]
    InvalidListSize,
    #[error("empty path list")]
    EmptyPathList,
    #[error("partial sums updated out of order: expected bit {expected}, got {actual}")]
    OutOfOrder { expected: usize, actual: usize },
    #[error("block length {0} too large for exhaustive enumeration")]
    TooLarge(usize),
    #[error("quantization width q = {0} must be at least 2")]
    InvalidWidth(u32),
    #[error("quantization step must be positive and finite, got {0}")]
    InvalidScale(f64),
    #[error("magnitude {magnitude} does not fit in {q}-bit sign-magnitude form")]
    MagnitudeOverflow { magnitude: u32, q: u32 },
    #[error("invalid frozen-mask file: {0}")]
    MaskFormat(String),
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("invalid cost-model parameters: {0}")]
    InvalidCostParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
