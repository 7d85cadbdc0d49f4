//! Exact-arithmetic checks of the 5D pure SU(2) instanton partition function
//! against the deformed Virasoro algebra.
//!
//! All arithmetic is over arbitrary-precision rationals. Parameters `q`, `t`
//! and `σ` are sampled rational points, `Q = σ²` is the Coulomb parameter and
//! functions of `Q` are kept as reduced univariate rational functions.

pub mod dvir;
pub mod error;
pub mod exact;
pub mod integral;
pub mod nekrasov;
pub mod params;
pub mod partitions;
pub mod sampling;

pub use error::{Error, Result};
pub use exact::{BigRational, Polynomial, RationalFunction};
pub use params::ParamPoint;
pub use partitions::Partition;
