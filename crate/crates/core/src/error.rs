use num_bigint::BigUint;
use thiserror::Error;

use crate::polyline::ShapePattern;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The orbit did not reach 1 within the allowed number of map applications.
    /// Callers must raise the limit; results are never truncated.
    #[error("trajectory of {start} did not reach 1 within {limit} steps")]
    LimitExceeded { start: BigUint, limit: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("({x}, {s}) is not a polyline: need x = s or x = s + 1 with both positive")]
    InvalidPolyline { x: BigUint, s: BigUint },

    #[error("sequence does not fit the {pattern} pattern: {reason}")]
    PatternMismatch {
        pattern: ShapePattern,
        reason: String,
    },

    #[error("cycle equation is degenerate: the power-of-2 and power-of-3 products coincide")]
    Degenerate,
}

pub type Result<T> = std::result::Result<T, Error>;
