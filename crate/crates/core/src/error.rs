use std::fmt;

use thiserror::Error;

/// Errors raised across simulation, analytic evaluation and the harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("covariance matrix for {process} on grid {grid} is not positive definite after jitter {jitter:e}")]
    NotPositiveDefinite {
        process: String,
        grid: String,
        jitter: f64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "root finding failed for level {target}: bracket [{lo}, {hi}] with values [{f_lo}, {f_hi}]"
    )]
    Convergence {
        target: f64,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("quadrature did not reach tolerance: estimate {estimate}, error bound {error:e}")]
    Quadrature { estimate: f64, error: f64 },

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: Shape, found: Shape },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Row/column extents used in shape diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape(pub usize, pub usize);

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.0, self.1)
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
