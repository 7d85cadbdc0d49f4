//! Deformed Virasoro algebra: structure constants, the truncated Verma
//! module, the contravariant form and the Whittaker vector.

pub mod gaiotto;
pub mod gram;
pub mod series;
pub mod verma;

pub use gaiotto::{
    agt_check, determine_prefactor, f_recursion_residuals, gaiotto_coeffs, gaiotto_norm_level,
    interpolate_f_level, AgtLevel, AgtReport, GaiottoVector, NormPrefactor,
};
pub use gram::{gram_matrix, kac_check, kac_degenerate_point, GramMatrix, KacReport, KacSample};
pub use series::StructureSeries;
pub use verma::{VermaModule, VermaVector};
