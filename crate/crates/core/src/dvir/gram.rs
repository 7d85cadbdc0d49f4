//! Contravariant form on a graded piece of the Verma module and the
//! factorized Kac determinant.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::verma::{VermaModule, VermaVector};
use crate::error::{Error, Result};
use crate::exact::linalg::{determinant, is_symmetric, Matrix};
use crate::exact::{fmt_rational, pow, to_ratio_string, BigRational};
use crate::params::ParamPoint;
use crate::partitions::Partition;

fn serialize_matrix<S: Serializer>(m: &Matrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(to_ratio_string).collect()).collect();
    rows.serialize(s)
}

/// `S⁽ⁿ⁾`, rows and columns in the order of [`Partition::all_of_size`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GramMatrix {
    pub level: usize,
    pub basis: Vec<Partition>,
    #[serde(serialize_with = "serialize_matrix")]
    pub entries: Matrix,
}

impl GramMatrix {
    pub fn is_symmetric(&self) -> bool {
        is_symmetric(&self.entries)
    }

    pub fn determinant(&self) -> BigRational {
        determinant(&self.entries)
    }

    pub fn index_of(&self, lambda: &Partition) -> Option<usize> {
        self.basis.iter().position(|b| b == lambda)
    }
}

/// Entry `(μ, λ)` is `⟨h| T_{μ_ℓ} ··· T_{μ_1} T_{−λ} |h⟩`.
pub fn gram_matrix_in(module: &VermaModule, n: usize) -> Result<GramMatrix> {
    if n > module.cap() {
        return Err(Error::InvalidArgument(format!(
            "level {n} exceeds module truncation {}",
            module.cap()
        )));
    }
    let basis = Partition::all_of_size(n);
    let entries = basis
        .par_iter()
        .map(|mu| {
            let modes: Vec<i64> = mu.parts().iter().map(|&p| p as i64).collect();
            basis
                .iter()
                .map(|lambda| {
                    let v = VermaVector::basis(lambda.clone(), module.h().clone(), module.cap());
                    Ok(module.apply_modes(&modes, &v)?.vacuum_coeff())
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Matrix>>()?;
    Ok(GramMatrix {
        level: n,
        basis,
        entries,
    })
}

/// `S⁽ⁿ⁾` at `h = σ + σ⁻¹`.
pub fn gram_matrix(n: usize, pt: &ParamPoint) -> Result<GramMatrix> {
    gram_matrix_in(&VermaModule::new(pt, n)?, n)
}

/// `h_{r,s}² = t^r q^{−s} + t^{−r} q^s + 2`.
pub fn kac_root_squared(r: i64, s: i64, pt: &ParamPoint) -> BigRational {
    pt.monomial(-s, r) + pt.monomial(s, -r) + BigRational::from_integer(2.into())
}

fn partition_count(n: usize) -> usize {
    Partition::all_of_size(n).len()
}

/// `∏_{rs≤n} ((h² − h_{r,s}²)(1 − q^r)(1 − t^{−r})/(q^r + t^r))^{p(n−rs)}`.
pub fn kac_product(n: usize, h: &BigRational, pt: &ParamPoint) -> Result<BigRational> {
    let one = BigRational::one();
    let h2 = h * h;
    let mut out = one.clone();
    for r in 1..=n as i64 {
        for s in 1..=n as i64 / r {
            let hr = kac_root_squared(r, s, pt);
            let zero_factor = &h2 - &hr;
            if zero_factor.is_zero() {
                return Err(Error::NonGeneric(format!(
                    "h² = h_{{{r},{s}}}² = {} at {pt}",
                    fmt_rational(&hr)
                )));
            }
            let (qr, tr) = (pow(pt.q(), r), pow(pt.t(), r));
            let den = &qr + &tr;
            if den.is_zero() {
                return Err(Error::NonGeneric(format!("q^{r} + t^{r} vanishes at {pt}")));
            }
            let factor = zero_factor * (&one - &qr) * (&one - tr.recip()) / den;
            out *= pow(&factor, partition_count(n - (r * s) as usize) as i64);
        }
    }
    Ok(out)
}

/// One `h` sample of the Kac check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KacSample {
    #[serde(serialize_with = "crate::exact::ratio_string::serialize")]
    pub h: BigRational,
    #[serde(serialize_with = "crate::exact::ratio_string::serialize")]
    pub determinant: BigRational,
    #[serde(serialize_with = "crate::exact::ratio_string::serialize")]
    pub product: BigRational,
    #[serde(serialize_with = "crate::exact::ratio_string::serialize")]
    pub ratio: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KacReport {
    pub level: usize,
    pub samples: Vec<KacSample>,
    /// True when every sample gives the same ratio.
    pub h_independent: bool,
}

impl KacReport {
    /// The fitted constant `C_n` when the ratio does not depend on `h`.
    pub fn constant(&self) -> Option<&BigRational> {
        self.h_independent.then(|| &self.samples[0].ratio)
    }
}

/// Compares `det S⁽ⁿ⁾` with the factorized product at several `σ` sharing
/// one `(q, t)`.
pub fn kac_check(n: usize, points: &[ParamPoint]) -> Result<KacReport> {
    if points.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "Kac check needs at least 3 h values, got {}",
            points.len()
        )));
    }
    let first = &points[0];
    if points.iter().any(|p| p.q() != first.q() || p.t() != first.t()) {
        return Err(Error::InvalidArgument("Kac check points must share (q, t)".into()));
    }
    let mut hs: Vec<BigRational> = points.iter().map(ParamPoint::h).collect::<Result<_>>()?;
    hs.sort();
    hs.dedup();
    if hs.len() != points.len() {
        return Err(Error::InvalidArgument("Kac check needs distinct h values".into()));
    }
    let samples = points
        .par_iter()
        .map(|pt| {
            let h = pt.h()?;
            let product = kac_product(n, &h, pt)?;
            let determinant = gram_matrix(n, pt)?.determinant();
            let ratio = &determinant / &product;
            Ok(KacSample {
                h,
                determinant,
                product,
                ratio,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let h_independent = samples.iter().all(|s| s.ratio == samples[0].ratio);
    Ok(KacReport {
        level: n,
        samples,
        h_independent,
    })
}

/// A point on the vanishing line `h = h_{r,s}`: `q = u²`, `t = v²` and
/// `σ = v^r u^{−s}`, so that `σ + σ⁻¹ = h_{r,s}` with rational entries.
pub fn kac_degenerate_point(r: i64, s: i64, u: &BigRational, v: &BigRational) -> Result<ParamPoint> {
    if r < 1 || s < 1 {
        return Err(Error::InvalidArgument("degenerate point needs r, s ≥ 1".into()));
    }
    let sigma = pow(v, r) * pow(u, -s);
    ParamPoint::new(u * u, v * v)?.with_sigma(sigma)
}
