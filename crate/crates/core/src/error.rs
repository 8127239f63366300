use thiserror::Error;

use crate::tikhonov::MinimizeResult;

/// Errors produced by this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size mismatch: expected {expected} points, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid grid function: {0}")]
    InvalidGrid(String),

    #[error("{name} = {value} is out of range: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("quadrature produced a non-finite value")]
    QuadratureFailure,

    #[error("forward evaluation overflows: exponent {exponent} exceeds the f64 range")]
    Overflow { exponent: f64 },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error(
        "minimizer not certified: objective {} exceeds the auxiliary bound {}",
        .best.objective,
        .best.certificate_bound
    )]
    Uncertified { best: Box<MinimizeResult> },

    #[error("rate study failed: {uncertified} of {total} solves were not certified")]
    StudyFailure { uncertified: usize, total: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        reason,
    }
}
