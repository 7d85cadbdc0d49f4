//! Exact rational sample points `(q, t, σ)`.
//!
//! `Q = σ²`, `h = σ + σ⁻¹` and `p = q/t` are derived on demand, so square
//! roots never enter the arithmetic.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{fmt_rational, pow, ratio_string, BigRational};

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamPoint {
    #[serde(with = "ratio_string")]
    q: BigRational,
    #[serde(with = "ratio_string")]
    t: BigRational,
    #[serde(default, with = "opt_ratio", skip_serializing_if = "Option::is_none")]
    sigma: Option<BigRational>,
}

mod opt_ratio {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match x {
            Some(v) => ratio_string::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<BigRational>, D::Error> {
        ratio_string::deserialize(d).map(Some)
    }
}

/// Exponent range that makes a point generic for level `n`: every monomial
/// `q^a t^b` with `0 < max(|a|,|b|) <= bound` must differ from `±1`, and
/// `σ²` must avoid `±q^a t^b` for `max(|a|,|b|) <= bound`.
pub fn genericity_bound(level: usize) -> i64 {
    2 * level as i64 + 4
}

impl ParamPoint {
    pub fn new(q: BigRational, t: BigRational) -> Result<Self> {
        if q.is_zero() || t.is_zero() {
            return Err(Error::NonGeneric("q and t must be nonzero".into()));
        }
        Ok(Self { q, t, sigma: None })
    }

    pub fn with_sigma(mut self, sigma: BigRational) -> Result<Self> {
        if sigma.is_zero() || sigma.abs().is_one() {
            return Err(Error::NonGeneric(format!(
                "sigma must avoid 0 and ±1, got {}",
                fmt_rational(&sigma)
            )));
        }
        self.sigma = Some(sigma);
        Ok(self)
    }

    /// Builds a point and checks it is generic for level `level`.
    pub fn for_level(
        q: BigRational,
        t: BigRational,
        sigma: Option<BigRational>,
        level: usize,
    ) -> Result<Self> {
        let mut pt = Self::new(q, t)?;
        if let Some(s) = sigma {
            pt = pt.with_sigma(s)?;
        }
        pt.ensure_generic(level)?;
        Ok(pt)
    }

    pub fn q(&self) -> &BigRational {
        &self.q
    }

    pub fn t(&self) -> &BigRational {
        &self.t
    }

    pub fn sigma(&self) -> Option<&BigRational> {
        self.sigma.as_ref()
    }

    pub fn require_sigma(&self) -> Result<&BigRational> {
        self.sigma
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("this operation needs σ".into()))
    }

    /// `p = q/t`.
    pub fn p(&self) -> BigRational {
        &self.q / &self.t
    }

    /// `q^a t^b`.
    pub fn monomial(&self, a: i64, b: i64) -> BigRational {
        pow(&self.q, a) * pow(&self.t, b)
    }

    /// `Q = σ²`.
    pub fn big_q(&self) -> Result<BigRational> {
        let s = self.require_sigma()?;
        Ok(s * s)
    }

    /// `h = σ + σ⁻¹`.
    pub fn h(&self) -> Result<BigRational> {
        let s = self.require_sigma()?;
        Ok(s + s.recip())
    }

    /// Rejects points where the working range of monomials collides.
    pub fn ensure_generic(&self, level: usize) -> Result<()> {
        let bound = genericity_bound(level);
        let minus_one = -BigRational::one();
        for a in -bound..=bound {
            for b in -bound..=bound {
                if a == 0 && b == 0 {
                    continue;
                }
                let m = self.monomial(a, b);
                if m.is_one() || m == minus_one {
                    return Err(Error::NonGeneric(format!(
                        "q^{a} t^{b} = {} at q={}, t={}",
                        fmt_rational(&m),
                        fmt_rational(&self.q),
                        fmt_rational(&self.t)
                    )));
                }
            }
        }
        if let Some(sigma) = &self.sigma {
            let big_q = sigma * sigma;
            let neg = -big_q.clone();
            for a in -bound..=bound {
                for b in -bound..=bound {
                    let m = self.monomial(a, b);
                    if m == big_q || m == neg {
                        return Err(Error::NonGeneric(format!(
                            "Q = σ² = {} collides with ±q^{a} t^{b}",
                            fmt_rational(&big_q)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for ParamPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={}, t={}", fmt_rational(&self.q), fmt_rational(&self.t))?;
        if let Some(s) = &self.sigma {
            write!(f, ", σ={}", fmt_rational(s))?;
        }
        Ok(())
    }
}

impl fmt::Debug for ParamPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParamPoint({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn derived_quantities() {
        let pt = ParamPoint::new(rat(2, 1), rat(3, 1))
            .unwrap()
            .with_sigma(rat(2, 1))
            .unwrap();
        assert_eq!(pt.p(), rat(2, 3));
        assert_eq!(pt.big_q().unwrap(), rat(4, 1));
        assert_eq!(pt.h().unwrap(), rat(5, 2));
        assert_eq!(pt.monomial(-1, 2), rat(9, 2));
    }

    #[test]
    fn genericity() {
        assert!(ParamPoint::for_level(rat(2, 1), rat(3, 1), Some(rat(5, 7)), 5).is_ok());
        // q = t^2
        assert!(ParamPoint::for_level(rat(9, 1), rat(3, 1), None, 1).is_err());
        // q = t: p = 1
        assert!(ParamPoint::for_level(rat(3, 1), rat(3, 1), None, 0).is_err());
        // Q = t/q sits on the pole grid
        let err = ParamPoint::for_level(rat(4, 1), rat(9, 1), Some(rat(3, 2)), 1).unwrap_err();
        assert!(err.is_non_generic());
        assert!(ParamPoint::new(rat(0, 1), rat(2, 1)).is_err());
        assert!(ParamPoint::new(rat(2, 1), rat(3, 1)).unwrap().with_sigma(rat(-1, 1)).is_err());
    }

    #[test]
    fn serde_roundtrip() {
        let pt = ParamPoint::new(rat(2, 1), rat(3, 5)).unwrap().with_sigma(rat(7, 2)).unwrap();
        let s = serde_json::to_string(&pt).unwrap();
        assert_eq!(s, r#"{"q":"2/1","t":"3/5","sigma":"7/2"}"#);
        let back: ParamPoint = serde_json::from_str(&s).unwrap();
        assert_eq!(back, pt);
    }
}
