use num_rational::BigRational;
use thiserror::Error;

use crate::exact::fmt_rational;

/// Errors raised by the exact-arithmetic layer and the checks built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero polynomial")]
    DivisionByZeroPolynomial,

    #[error("pole at {}", fmt_rational(.0))]
    PoleAt(BigRational),

    #[error("not a pole: {}", fmt_rational(.0))]
    NotAPole(BigRational),

    #[error("higher-order pole at {} (multiplicity {multiplicity})", fmt_rational(.location))]
    HigherOrderPole {
        location: BigRational,
        multiplicity: usize,
    },

    #[error("denominator does not split over the candidate poles; unfactored remainder {remainder}")]
    Unfactored { remainder: String },

    #[error("interpolation failed: {0}")]
    InterpolationFailed(String),

    #[error("degree bound too small: {0}")]
    DegreeBoundTooSmall(String),

    #[error("singular matrix")]
    SingularMatrix,

    #[error("non-generic parameters: {0}")]
    NonGeneric(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-simple pole at step {step}: order {order} at {}", fmt_rational(.location))]
    NonSimplePole {
        step: usize,
        location: BigRational,
        order: i64,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that disappear after resampling the parameter point.
    pub fn is_non_generic(&self) -> bool {
        matches!(self, Error::NonGeneric(_) | Error::PoleAt(_))
    }
}
