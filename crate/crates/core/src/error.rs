//! Error type shared by the fallible entry points of the crate.
//!
//! Contract violations inside exact arithmetic (basis mixing, division by
//! zero) are panics, not errors: they indicate a bug in the caller, never
//! bad user input. Everything reachable from user input goes through this
//! enum instead.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at column {col}: {msg}")]
    Parse { msg: String, col: usize },

    #[error("unsupported symmetry {n} (supported: 5, 8, 12)")]
    UnsupportedSymmetry { n: u32 },

    #[error("unsupported ring for this operation: {0}")]
    UnsupportedRing(String),

    #[error("{0} is not a rational prime")]
    NotPrime(u64),

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("sector point out of range: {0}")]
    InvalidSector(String),

    #[error("unsupported dimension {0}")]
    BadDimension(u32),

    #[error("margin {margin} too small for reliable membership decisions (need > {needed})")]
    MarginTooSmall { margin: f64, needed: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
