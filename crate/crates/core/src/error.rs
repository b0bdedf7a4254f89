use thiserror::Error;

/// Errors raised by the library. Divergent integrals are values, not errors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid exponents: {0}")]
    InvalidExponents(String),
    #[error("r = {r} > 1: the inequality is trivial (only f = 0 satisfies it)")]
    Triviality { r: f64 },
    #[error("exponents outside the required region: {0}")]
    WrongCase(String),
    #[error("unsupported exponents: {0}")]
    UnsupportedExponents(String),
    #[error("formula {index} is undefined for these exponents: {reason}")]
    FormulaUndefined { index: String, reason: String },
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("degenerate weight: {0}")]
    DegenerateWeight(String),
    #[error("invalid step function: {0}")]
    InvalidStepFunction(String),
    #[error("function is not non-increasing")]
    NotMonotone,
    #[error("function is identically zero")]
    ZeroFunction,
    #[error("right-hand side vanishes")]
    ZeroDenominator,
    #[error("function does not belong to the class of rearrangements vanishing at infinity")]
    NotInA,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("sequence length {len} exceeds the brute-force limit {max}")]
    TooLarge { len: usize, max: usize },
    #[error("invalid sequences: {0}")]
    InvalidSequence(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
