use thiserror::Error;

use crate::polycore::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(ParseError),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("variable index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },
    #[error("{0} of the zero polynomial")]
    ZeroPolynomial(&'static str),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("invalid weights: {0}")]
    InvalidRho(String),
    #[error("polynomial has degree 0 in the eliminated variable")]
    DegreeZero,
    #[error("root finder did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize, partial: Vec<num_complex::Complex64> },
    #[error("empty or non-curve fiber: {0}")]
    NotACurve(String),
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("generic Euler characteristic unstable, increase precision (samples gave {0:?})")]
    GenericChiUnstable(Vec<i64>),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
