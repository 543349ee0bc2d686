use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sequence is empty")]
    EmptySequence,

    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("sequence too short for differences: length {0}, need at least 2")]
    TooShort(usize),

    #[error("epsilon must be finite and nonnegative, got {0}")]
    InvalidEpsilon(f64),

    #[error("tolerance must be finite and nonnegative, got {0}")]
    InvalidTolerance(f64),

    #[error("mediant bounds need at least one ratio")]
    EmptyRatios,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("denominator b[{index}] = {value} is not strictly positive")]
    NonPositiveDenominator { index: usize, value: f64 },

    #[error("x = {x} lies outside the extension domain [0, {upper}]")]
    OutOfDomain { x: f64, upper: f64 },

    #[error("degenerate span: y - x = {0} is below 1e-12")]
    DegenerateSpan(f64),

    #[error("certificate index {index} out of range for sequence of length {len}")]
    CertificateIndex { index: usize, len: usize },

    #[error(
        "gap u - gcm(u) = {gap} at index {index} exceeds eps = {eps}; \
         the eps/2 bound is not certified under this quantifier mode"
    )]
    GapExceeded { index: usize, gap: f64, eps: f64 },

    #[error(
        "no separating line: lower[{lower_index}] and upper[{upper_index}] \
         leave an empty intercept band (overlap {overlap})"
    )]
    NoSeparatingLine {
        lower_index: usize,
        upper_index: usize,
        overlap: f64,
    },

    #[error("sequence length {len} exceeds the brute-force guard of {max}; use the fast path")]
    OracleGuard { len: usize, max: usize },

    #[error("generator length must be positive")]
    ZeroLength,
}
