//! Fixtures shared by the benchmarks.

use qagt_core::exact::rat;
use qagt_core::ParamPoint;

/// A fixed generic point with small numerators, `q = 2/3`, `t = 5/7`, `σ = 11/4`.
pub fn fixed_point() -> ParamPoint {
    ParamPoint::new(rat(2, 3), rat(5, 7))
        .and_then(|p| p.with_sigma(rat(11, 4)))
        .expect("fixed point is valid")
}
