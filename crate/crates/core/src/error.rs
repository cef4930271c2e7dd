use thiserror::Error;

/// Errors raised by the capacity, bound and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("argument outside its domain: {0}")]
    Domain(String),

    /// Noise correlation with |phi| > 1 makes the joint noise covariance indefinite.
    #[error("noise correlation |phi| = {0} exceeds 1; covariance is not positive semidefinite")]
    PsdViolation(f64),

    #[error("degenerate Gaussian distribution: {0}")]
    Degenerate(String),

    #[error("bisection bracket lost its sign change: pi(lo) = {lo}, pi(hi) = {hi}")]
    Bracket { lo: f64, hi: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
