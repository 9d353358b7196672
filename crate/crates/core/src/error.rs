use thiserror::Error;

use crate::expr::{EvalError, ParseError};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Eval(#[from] EvalError),

    #[error("metric degenerate at {point:?}: |det g| = {det:.3e} below threshold {eps:.1e}")]
    DegenerateMetric { point: Vec<f64>, det: f64, eps: f64 },

    #[error("Weyl-based operation undefined for dimension {dim}; need at least 4")]
    WeylDimension { dim: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point {point:?} lies outside the chart domain")]
    OutsideDomain { point: Vec<f64> },

    #[error("tensor slot {slot} out of range for rank {rank}")]
    SlotOutOfRange { slot: usize, rank: usize },

    #[error("tensor slot {slot} already has the requested variance")]
    VarianceMismatch { slot: usize },

    #[error("invalid jet order {order}; supported range is 0..=4")]
    JetOrder { order: usize },

    #[error("warping function must stay positive on its interval; f({t}) = {value}")]
    NonPositiveWarp { t: f64, value: f64 },

    #[error("contact structure needs odd dimension, got {dim}")]
    ContactDimension { dim: usize },

    #[error("metric definition error at line {line}: {message}")]
    MetricFile { line: usize, message: String },

    #[error("unknown catalog entry '{0}'")]
    UnknownEntry(String),

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
