//! Whittaker vector `|G⟩ = Σ_n Λ^{2n} |G_n⟩` and its norm coefficients.
//!
//! `|G_n⟩` is fixed by `T₁|G_n⟩ = |G_{n−1}⟩`, `T_k|G_n⟩ = 0` for `2 ≤ k ≤ n`,
//! with `|G_0⟩ = |h⟩`. Pairing the conditions with the basis shows that the
//! coefficient vector of `|G_n⟩` is `(S⁽ⁿ⁾)⁻¹ e_{1ⁿ}`, so
//! `⟨G_n|G_n⟩ = (S⁽ⁿ⁾)⁻¹(1ⁿ, 1ⁿ)`.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::gram::gram_matrix_in;
use super::verma::{serialize_coeffs, Coeffs, VermaModule, VermaVector};
use crate::error::{Error, Result};
use crate::exact::linalg::{inverse, solve_unique, Matrix};
use crate::exact::{cauchy_interpolate, pow, BigRational, RationalFunction};
use crate::nekrasov::{recursion_residual_of, z_level_value, PolePair};
use crate::params::ParamPoint;
use crate::partitions::Partition;
use crate::sampling::sigma_ladder;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct GaiottoLevel(#[serde(serialize_with = "serialize_coeffs")] pub Coeffs);

/// Coefficients of `|G_n⟩` in the basis `T_{−λ}|h⟩`, per level, with the
/// convention `T₁|G⟩ = Λ²|G⟩` absorbed into the grading.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaiottoVector {
    pub levels: Vec<GaiottoLevel>,
}

impl GaiottoVector {
    pub fn level(&self, n: usize) -> &Coeffs {
        &self.levels[n].0
    }
}

fn coeffs_to_vector(c: &Coeffs, basis: &[Partition]) -> Vec<BigRational> {
    basis
        .iter()
        .map(|b| c.get(b).cloned().unwrap_or_else(BigRational::zero))
        .collect()
}

/// Solves the Whittaker conditions level by level and re-applies
/// `T₁, ..., T_n` to the result.
pub fn gaiotto_coeffs_in(module: &VermaModule, n_max: usize) -> Result<GaiottoVector> {
    if n_max > module.cap() {
        return Err(Error::InvalidArgument(format!(
            "level {n_max} exceeds module truncation {}",
            module.cap()
        )));
    }
    let h = module.h().clone();
    let cap = module.cap();
    let mut levels = vec![GaiottoLevel(VermaVector::vacuum(h.clone(), cap).coeffs)];
    for n in 1..=n_max {
        let basis = Partition::all_of_size(n);
        let images: Vec<Vec<VermaVector>> = basis
            .par_iter()
            .map(|lambda| {
                let v = VermaVector::basis(lambda.clone(), h.clone(), cap);
                (1..=n as i64).map(|k| module.apply_mode(k, &v)).collect()
            })
            .collect::<Result<_>>()?;
        let mut rows: Matrix = Vec::new();
        let mut rhs = Vec::new();
        for k in 1..=n {
            let target_basis = Partition::all_of_size(n - k);
            let target = if k == 1 {
                coeffs_to_vector(&levels[n - 1].0, &target_basis)
            } else {
                vec![BigRational::zero(); target_basis.len()]
            };
            for (row, nu) in target_basis.iter().enumerate() {
                rows.push(
                    images
                        .iter()
                        .map(|img| img[k - 1].coeffs.get(nu).cloned().unwrap_or_else(BigRational::zero))
                        .collect(),
                );
                rhs.push(target[row].clone());
            }
        }
        let solution = solve_unique(&rows, &rhs).map_err(|e| {
            Error::NonGeneric(format!("Whittaker system at level {n} is not uniquely solvable: {e}"))
        })?;
        let coeffs: Coeffs = basis
            .iter()
            .cloned()
            .zip(solution)
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let g = VermaVector {
            coeffs: coeffs.clone(),
            h: h.clone(),
            cap,
        };
        for k in 1..=n as i64 {
            let image = module.apply_mode(k, &g)?;
            let expected = if k == 1 { levels[n - 1].0.clone() } else { Coeffs::new() };
            if image.coeffs != expected {
                return Err(Error::Internal(format!(
                    "T_{k}|G_{n}⟩ does not reproduce the defining condition"
                )));
            }
        }
        levels.push(GaiottoLevel(coeffs));
    }
    Ok(GaiottoVector { levels })
}

pub fn gaiotto_coeffs(n_max: usize, pt: &ParamPoint) -> Result<GaiottoVector> {
    gaiotto_coeffs_in(&VermaModule::new(pt, n_max)?, n_max)
}

/// `(S⁽ⁿ⁾)⁻¹(1ⁿ, 1ⁿ)`.
pub fn gaiotto_norm_in(module: &VermaModule, n: usize) -> Result<BigRational> {
    let gram = gram_matrix_in(module, n)?;
    let inv = inverse(&gram.entries)
        .map_err(|_| Error::NonGeneric(format!("Gram matrix at level {n} is singular")))?;
    let last = gram.basis.len() - 1;
    debug_assert_eq!(gram.basis[last], Partition::column(n));
    Ok(inv[last][last].clone())
}

pub fn gaiotto_norm_level(n: usize, pt: &ParamPoint) -> Result<BigRational> {
    gaiotto_norm_in(&VermaModule::new(pt, n)?, n)
}

/// `Σ_{λ,μ} c_λ c_μ S(λ, μ)` from the solved coefficients.
pub fn gaiotto_pairing_in(module: &VermaModule, g: &GaiottoVector, n: usize) -> Result<BigRational> {
    let gram = gram_matrix_in(module, n)?;
    let c = coeffs_to_vector(g.level(n), &gram.basis);
    let mut total = BigRational::zero();
    for (i, row) in gram.entries.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            total += &c[i] * s * &c[j];
        }
    }
    Ok(total)
}

/// Candidate normalizations `F_n = m^n (S⁽ⁿ⁾)⁻¹(1ⁿ, 1ⁿ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum NormPrefactor {
    /// `m = q/t`
    #[serde(rename = "(q/t)^n")]
    QOverT,
    /// `m = t/q`
    #[serde(rename = "(t/q)^n")]
    TOverQ,
    #[serde(rename = "1")]
    One,
}

impl NormPrefactor {
    pub const ALL: [NormPrefactor; 3] = [NormPrefactor::QOverT, NormPrefactor::TOverQ, NormPrefactor::One];

    pub fn base(self, pt: &ParamPoint) -> BigRational {
        match self {
            NormPrefactor::QOverT => pt.p(),
            NormPrefactor::TOverQ => pt.p().recip(),
            NormPrefactor::One => BigRational::one(),
        }
    }

    pub fn at_level(self, n: usize, pt: &ParamPoint) -> BigRational {
        pow(&self.base(pt), n as i64)
    }

    pub fn label(self) -> &'static str {
        match self {
            NormPrefactor::QOverT => "(q/t)^n",
            NormPrefactor::TOverQ => "(t/q)^n",
            NormPrefactor::One => "1",
        }
    }
}

/// The unique candidate with `F_1 = Z_1(σ²)`, or `None`.
pub fn determine_prefactor(pt: &ParamPoint) -> Result<Option<NormPrefactor>> {
    let norm = gaiotto_norm_level(1, pt)?;
    let z1 = z_level_value(1, &pt.big_q()?, pt)?;
    let hits: Vec<_> = NormPrefactor::ALL
        .into_iter()
        .filter(|c| c.at_level(1, pt) * &norm == z1)
        .collect();
    Ok(match hits.as_slice() {
        [one] => Some(*one),
        _ => None,
    })
}

/// `F_n` with a fixed normalization.
pub fn f_level(n: usize, prefactor: NormPrefactor, pt: &ParamPoint) -> Result<BigRational> {
    Ok(prefactor.at_level(n, pt) * gaiotto_norm_level(n, pt)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AgtLevel {
    pub level: usize,
    #[serde(serialize_with = "crate::exact::ratio_string::serialize")]
    pub norm_side: BigRational,
    #[serde(serialize_with = "crate::exact::ratio_string::serialize")]
    pub instanton_side: BigRational,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AgtReport {
    pub prefactor: NormPrefactor,
    pub levels: Vec<AgtLevel>,
}

impl AgtReport {
    pub fn passed(&self) -> bool {
        self.levels.iter().all(|l| l.equal)
    }
}

/// Compares `F_k` with `Z_k(σ²)` for `k = 0..=n`, using a prefactor frozen
/// beforehand at level one.
pub fn agt_check(n: usize, prefactor: NormPrefactor, pt: &ParamPoint) -> Result<AgtReport> {
    let module = VermaModule::new(pt, n)?;
    let big_q = pt.big_q()?;
    let levels = (0..=n)
        .map(|k| {
            let norm_side = prefactor.at_level(k, pt) * gaiotto_norm_in(&module, k)?;
            let instanton_side = z_level_value(k, &big_q, pt)?;
            Ok(AgtLevel {
                level: k,
                equal: norm_side == instanton_side,
                norm_side,
                instanton_side,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AgtReport { prefactor, levels })
}

/// `F_n(Q)` reconstructed from `σ`-samples at fixed `(q, t)`.
///
/// The degree bounds come from the candidate pole grid: denominator degree
/// at most the grid size, numerator degree one less.
pub fn interpolate_f_level(n: usize, prefactor: NormPrefactor, pt: &ParamPoint) -> Result<RationalFunction> {
    if n == 0 {
        return Ok(RationalFunction::one());
    }
    let poles = PolePair::up_to(n).len();
    let (deg_num, deg_den) = (poles - 1, poles);
    let count = deg_num + deg_den + 2;
    let sigmas = sigma_ladder(pt, n, count);
    if sigmas.len() < count {
        return Err(Error::NonGeneric(format!("not enough generic σ at {pt}")));
    }
    let samples = sigmas
        .par_iter()
        .map(|s| {
            let p = pt.clone().with_sigma(s.clone())?;
            Ok((p.big_q()?, f_level(n, prefactor, &p)?))
        })
        .collect::<Result<Vec<_>>>()?;
    cauchy_interpolate(&samples, deg_num, deg_den)
}

/// Recursion residuals of the interpolated `F_1, ..., F_n`, one per level.
pub fn f_recursion_residuals(
    n: usize,
    prefactor: NormPrefactor,
    pt: &ParamPoint,
) -> Result<Vec<RationalFunction>> {
    let mut levels = vec![RationalFunction::one()];
    for k in 1..=n {
        levels.push(interpolate_f_level(k, prefactor, pt)?);
    }
    (1..=n).map(|k| recursion_residual_of(&levels, k, pt)).collect()
}

/// Human-readable form of a nonzero residual, for reports.
pub fn describe_residual(f: &RationalFunction) -> String {
    if f.is_zero() {
        "0".into()
    } else {
        format!("({}) / ({})", f.numerator(), f.denominator())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dvir::gram::gram_matrix;
    use crate::exact::rat;

    fn point(q: (i64, i64), t: (i64, i64), s: (i64, i64)) -> ParamPoint {
        ParamPoint::new(rat(q.0, q.1), rat(t.0, t.1))
            .unwrap()
            .with_sigma(rat(s.0, s.1))
            .unwrap()
    }

    #[test]
    fn low_levels() {
        let pt = point((2, 1), (3, 1), (2, 1));
        let g = gaiotto_coeffs(2, &pt).unwrap();
        assert_eq!(g.level(0).get(&Partition::empty()), Some(&rat(1, 1)));
        let s1 = gram_matrix(1, &pt).unwrap().entries[0][0].clone();
        assert_eq!(g.level(1).get(&Partition::column(1)), Some(&s1.recip()));
        assert_eq!(gaiotto_norm_level(0, &pt).unwrap(), rat(1, 1));
        assert_eq!(gaiotto_norm_level(1, &pt).unwrap(), s1.recip());
    }

    #[test]
    fn level_two_matches_cofactor() {
        let pt = point((2, 1), (3, 1), (2, 1));
        let s = gram_matrix(2, &pt).unwrap().entries;
        // basis [(2), (1,1)]: inverse entry (1,1) is s₀₀ / det
        let det = &s[0][0] * &s[1][1] - &s[0][1] * &s[1][0];
        assert_eq!(gaiotto_norm_level(2, &pt).unwrap(), &s[0][0] / det);
    }

    #[test]
    fn norm_equals_pairing() {
        let pt = point((3, 5), (7, 2), (5, 3));
        let module = VermaModule::new(&pt, 4).unwrap();
        let g = gaiotto_coeffs_in(&module, 4).unwrap();
        for n in 0..=4 {
            assert_eq!(
                gaiotto_pairing_in(&module, &g, n).unwrap(),
                gaiotto_norm_in(&module, n).unwrap(),
                "level {n}"
            );
        }
    }

    #[test]
    fn serializes_levels() {
        let pt = point((2, 1), (3, 1), (2, 1));
        let g = gaiotto_coeffs(1, &pt).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"levels":[{"[]":"1/1"},{"[1]":"6/5"}]}"#);
    }

    #[test]
    fn prefactor_at_level_one() {
        let pt = point((2, 1), (3, 1), (2, 1));
        assert_eq!(determine_prefactor(&pt).unwrap(), Some(NormPrefactor::QOverT));
    }

    #[test]
    fn agt_low_levels() {
        let pt = point((5, 3), (7, 11), (9, 4));
        let pref = determine_prefactor(&pt).unwrap().unwrap();
        let report = agt_check(2, pref, &pt).unwrap();
        assert!(report.passed(), "{report:?}");
    }
}
