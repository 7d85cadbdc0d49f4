//! Truncated Verma module and the commutator rewriting engine.
//!
//! Basis vectors are `T_{−λ}|h⟩ = T_{−λ₁} T_{−λ₂} ··· |h⟩` with `λ` weakly
//! decreasing, so the leftmost mode is the most negative. A product
//! `T_k T_{−λ}|h⟩` that is not already of this form is reordered with
//!
//! ```text
//! T_n T_m = T_m T_n − Σ_{l≥1} f_l (T_{n−l} T_{m+l} − T_{m−l} T_{n+l}) + central(n) δ_{n+m,0}
//! ```
//!
//! applied to the leftmost pair, `n = k`, `m = −λ₁`. Every vector the
//! rewrite acts on has strictly smaller level than `λ`, so the recursion
//! terminates, and only `f_l` with `l ≤ |λ|` contribute.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use super::series::StructureSeries;
use crate::error::{Error, Result};
use crate::exact::{to_ratio_string, BigRational};
use crate::params::ParamPoint;
use crate::partitions::Partition;

pub type Coeffs = BTreeMap<Partition, BigRational>;

/// Serializes a partition-keyed map as `{"[3,1]": "n/d", ...}`.
pub(crate) fn serialize_coeffs<S: Serializer>(c: &Coeffs, s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(c.len()))?;
    for (k, v) in c {
        let parts: Vec<String> = k.parts().iter().map(|p| p.to_string()).collect();
        map.serialize_entry(&format!("[{}]", parts.join(",")), &to_ratio_string(v))?;
    }
    map.end()
}

/// Element of the Verma module truncated at level `cap`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VermaVector {
    #[serde(serialize_with = "serialize_coeffs")]
    pub coeffs: Coeffs,
    #[serde(serialize_with = "crate::exact::ratio_string::serialize")]
    pub h: BigRational,
    pub cap: usize,
}

impl VermaVector {
    /// `|h⟩`.
    pub fn vacuum(h: BigRational, cap: usize) -> Self {
        Self::basis(Partition::empty(), h, cap)
    }

    /// `T_{−λ}|h⟩`.
    pub fn basis(lambda: Partition, h: BigRational, cap: usize) -> Self {
        let mut coeffs = Coeffs::new();
        coeffs.insert(lambda, BigRational::one());
        Self { coeffs, h, cap }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `|h⟩`.
    pub fn vacuum_coeff(&self) -> BigRational {
        self.coeffs
            .get(&Partition::empty())
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Highest level with a nonzero coefficient.
    pub fn max_level(&self) -> Option<usize> {
        self.coeffs.keys().map(Partition::size).max()
    }

    pub fn levels(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.coeffs.keys().map(Partition::size).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn add_scaled(out: &mut Coeffs, src: &Coeffs, c: &BigRational) {
    if c.is_zero() {
        return;
    }
    for (k, v) in src {
        let e = out.entry(k.clone()).or_insert_with(BigRational::zero);
        *e += v * c;
        if e.is_zero() {
            out.remove(k);
        }
    }
}

/// Verma module `M_h` at fixed `(q, t, h)`, with a memo of `T_k T_{−λ}|h⟩`.
pub struct VermaModule {
    series: StructureSeries,
    h: BigRational,
    cap: usize,
    memo: RwLock<HashMap<(i64, Partition), Arc<Coeffs>>>,
}

impl VermaModule {
    /// Module at `h = σ + σ⁻¹` with vectors up to level `cap`.
    pub fn new(pt: &ParamPoint, cap: usize) -> Result<Self> {
        Self::with_h(pt, pt.h()?, cap)
    }

    pub fn with_h(pt: &ParamPoint, h: BigRational, cap: usize) -> Result<Self> {
        Ok(Self {
            series: StructureSeries::new(cap.max(1), pt)?,
            h,
            cap,
            memo: RwLock::new(HashMap::new()),
        })
    }

    pub fn h(&self) -> &BigRational {
        &self.h
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn series(&self) -> &StructureSeries {
        &self.series
    }

    fn depth_limit(&self) -> usize {
        2 * self.cap + 8
    }

    /// `T_k v`.
    pub fn apply_mode(&self, k: i64, v: &VermaVector) -> Result<VermaVector> {
        let top = v.max_level().unwrap_or(0) as i64;
        if top - k > self.cap as i64 {
            return Err(Error::InvalidArgument(format!(
                "T_{k} on a level-{top} vector leaves the truncation at level {}",
                self.cap
            )));
        }
        let mut out = Coeffs::new();
        for (lambda, c) in &v.coeffs {
            add_scaled(&mut out, &*self.act(k, lambda, 0)?, c);
        }
        Ok(VermaVector {
            coeffs: out,
            h: self.h.clone(),
            cap: self.cap,
        })
    }

    /// `T_{k_r} ··· T_{k_1} v`, applying `k_1` first.
    pub fn apply_modes(&self, modes: &[i64], v: &VermaVector) -> Result<VermaVector> {
        modes.iter().try_fold(v.clone(), |acc, &k| self.apply_mode(k, &acc))
    }

    fn apply_into(&self, k: i64, src: &Coeffs, scale: &BigRational, out: &mut Coeffs, depth: usize) -> Result<()> {
        if scale.is_zero() {
            return Ok(());
        }
        for (lambda, c) in src {
            add_scaled(out, &*self.act(k, lambda, depth)?, &(c * scale));
        }
        Ok(())
    }

    /// `T_k T_{−λ}|h⟩` in the canonical basis.
    fn act(&self, k: i64, lambda: &Partition, depth: usize) -> Result<Arc<Coeffs>> {
        if depth > self.depth_limit() {
            return Err(Error::Internal(format!(
                "rewriting exceeded depth {} at T_{k} T_-{lambda}",
                self.depth_limit()
            )));
        }
        let size = lambda.size() as i64;
        if k > size {
            return Ok(Arc::new(Coeffs::new()));
        }
        if lambda.is_empty() {
            let mut out = Coeffs::new();
            if k == 0 {
                out.insert(Partition::empty(), self.h.clone());
            } else {
                out.insert(Partition::empty().with_leading((-k) as usize), BigRational::one());
            }
            return Ok(Arc::new(out));
        }
        if k < 0 && -k >= lambda.part(1) as i64 {
            let mut out = Coeffs::new();
            out.insert(lambda.with_leading((-k) as usize), BigRational::one());
            return Ok(Arc::new(out));
        }
        let key = (k, lambda.clone());
        if let Some(hit) = self.memo.read().expect("memo lock").get(&key) {
            return Ok(hit.clone());
        }

        let n = k;
        let m = -(lambda.part(1) as i64);
        let rest = lambda.tail();
        let next = depth + 1;
        let mut out = Coeffs::new();
        self.apply_into(m, &*self.act(n, &rest, next)?, &BigRational::one(), &mut out, next)?;
        for l in 1..=size {
            let f = self.series.f(l as usize)?;
            self.apply_into(n - l, &*self.act(m + l, &rest, next)?, &-f, &mut out, next)?;
            self.apply_into(m - l, &*self.act(n + l, &rest, next)?, f, &mut out, next)?;
        }
        if n + m == 0 {
            let mut base = Coeffs::new();
            base.insert(rest, BigRational::one());
            add_scaled(&mut out, &base, &self.series.central(n));
        }

        let out = Arc::new(out);
        self.memo
            .write()
            .expect("memo lock")
            .entry(key)
            .or_insert_with(|| out.clone());
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn module(cap: usize) -> (VermaModule, ParamPoint) {
        let pt = ParamPoint::new(rat(2, 1), rat(3, 1)).unwrap().with_sigma(rat(2, 1)).unwrap();
        (VermaModule::new(&pt, cap).unwrap(), pt)
    }

    #[test]
    fn highest_weight_conditions() {
        let (m, _) = module(6);
        let vac = VermaVector::vacuum(m.h().clone(), 6);
        for k in 1..=6 {
            assert!(m.apply_mode(k, &vac).unwrap().is_zero());
        }
        let t0 = m.apply_mode(0, &vac).unwrap();
        assert_eq!(t0.vacuum_coeff(), rat(5, 2));
        let down = m.apply_mode(-2, &vac).unwrap();
        assert_eq!(down, VermaVector::basis(Partition::new(vec![2]).unwrap(), rat(5, 2), 6));
    }

    #[test]
    fn level_one_pairing() {
        let (m, _) = module(2);
        let h = m.h().clone();
        let v = VermaVector::basis(Partition::new(vec![1]).unwrap(), h.clone(), 2);
        let got = m.apply_mode(1, &v).unwrap();
        let f1 = m.series().f(1).unwrap().clone();
        let expected = -(&f1 * &h * &h) + m.series().central(1);
        assert_eq!(got.levels(), vec![0]);
        assert_eq!(got.vacuum_coeff(), expected);
        assert_eq!(expected, rat(5, 6));
    }

    #[test]
    fn zero_mode_on_level_one() {
        // T_0 T_{−1}|h⟩ = T_{−1} T_0|h⟩ − f₁ (T_{−1} T_0 − T_{−2} T_1)|h⟩
        let (m, _) = module(2);
        let h = m.h().clone();
        let v = VermaVector::basis(Partition::new(vec![1]).unwrap(), h.clone(), 2);
        let got = m.apply_mode(0, &v).unwrap();
        let f1 = m.series().f(1).unwrap().clone();
        let mut expected = Coeffs::new();
        expected.insert(Partition::new(vec![1]).unwrap(), &h - &f1 * &h);
        assert_eq!(got.coeffs, expected);
    }

    #[test]
    fn truncation_enforced() {
        let (m, _) = module(2);
        let v = VermaVector::basis(Partition::new(vec![2]).unwrap(), m.h().clone(), 2);
        assert!(m.apply_mode(-1, &v).is_err());
    }

    #[test]
    fn serializes_partition_keys() {
        let (m, _) = module(2);
        let v = m.apply_mode(-1, &VermaVector::basis(Partition::new(vec![1]).unwrap(), m.h().clone(), 2)).unwrap();
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"coeffs":{"[1,1]":"1/1"},"h":"5/2","cap":2}"#);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn grading_is_respected(k in -2i64..=4, n in 0usize..=4, pick in 0usize..5) {
            let (m, _) = module(6);
            let all = Partition::all_of_size(n);
            let lambda = all[pick % all.len()].clone();
            let v = VermaVector::basis(lambda, m.h().clone(), 6);
            let out = m.apply_mode(k, &v).unwrap();
            let target = n as i64 - k;
            for key in out.coeffs.keys() {
                prop_assert_eq!(key.size() as i64, target);
            }
            if target < 0 {
                prop_assert!(out.is_zero());
            }
        }
    }
}
