//! Exact scalars, univariate polynomials and rational functions in `Q`.
//!
//! `BigRational` is the only scalar type in the crate. Everything symbolic
//! lives in the single variable `Q`; the deformation parameters are always
//! concrete rationals.

mod interpolate;
pub mod linalg;
mod poly;
mod ratfun;

pub use interpolate::cauchy_interpolate;
pub use poly::Polynomial;
pub use ratfun::{split_roots, PoleDecomposition, RationalFunction, RootSplit};

pub use num_rational::BigRational;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Shorthand for `n / d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `x^e` for any integer exponent; `x` must be nonzero when `e < 0`.
pub fn pow(x: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { x.recip() } else { x.clone() };
    let mut e = e.unsigned_abs();
    let mut acc = BigRational::one();
    let mut b = base;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    acc
}

/// Serialises as `"num/den"`, always with an explicit denominator.
pub fn to_ratio_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Human-oriented form: integers drop the `/1`.
pub fn fmt_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        to_ratio_string(x)
    }
}

/// Parses `"n"` or `"n/d"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidArgument(format!("not a rational number: {s:?}"));
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Serde adapter writing rationals as `"num/den"` strings.
pub mod ratio_string {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&to_ratio_string(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ratio_strings() {
        assert_eq!(to_ratio_string(&rat(-6, 4)), "-3/2");
        assert_eq!(to_ratio_string(&rat(5, 1)), "5/1");
        assert_eq!(fmt_rational(&rat(5, 1)), "5");
        assert_eq!(parse_rational("-3/2").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), rat(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn integer_powers() {
        assert_eq!(pow(&rat(2, 3), 3), rat(8, 27));
        assert_eq!(pow(&rat(2, 3), -2), rat(9, 4));
        assert_eq!(pow(&rat(5, 1), 0), rat(1, 1));
    }

    fn small_rat() -> impl Strategy<Value = BigRational> {
        (-9i64..=9, 1i64..=5).prop_map(|(n, d)| rat(n, d))
    }

    fn nonzero_rat() -> impl Strategy<Value = BigRational> {
        small_rat().prop_filter("nonzero", |x| !x.is_zero())
    }

    fn poly(max_deg: usize) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(small_rat(), 0..=max_deg + 1).prop_map(Polynomial::new)
    }

    /// Random function with distinct simple rational poles and a small
    /// polynomial part, expressed directly through its expansion.
    fn simple_pole_function() -> impl Strategy<Value = (PoleDecomposition, Vec<BigRational>)> {
        (
            prop::collection::btree_map(small_rat(), nonzero_rat(), 0..6),
            poly(2),
        )
            .prop_map(|(terms, polynomial_part)| {
                let poles: Vec<_> = terms.keys().cloned().collect();
                (
                    PoleDecomposition {
                        terms: terms.into_iter().collect(),
                        polynomial_part,
                    },
                    poles,
                )
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn scaling_does_not_change_values(
            num in poly(4),
            den in poly(4).prop_filter("nonzero", |p| !p.is_zero()),
            a in nonzero_rat(),
            x in small_rat(),
        ) {
            let f = RationalFunction::reduce(num.clone(), den.clone()).unwrap();
            let g = RationalFunction::reduce(num.scale(&a), den.scale(&a)).unwrap();
            prop_assert_eq!(&f, &g);
            if let Ok(v) = f.evaluate(&x) {
                prop_assert_eq!(g.evaluate(&x).unwrap(), v);
            }
        }

        #[test]
        fn partial_fractions_recombine((dec, poles) in simple_pole_function()) {
            let f = dec.recombine();
            let back = f.partial_fractions(&poles).unwrap();
            prop_assert_eq!(back.recombine(), f);
            prop_assert_eq!(back, dec);
        }

        #[test]
        fn residue_is_limit_of_multiplied_function((dec, poles) in simple_pole_function()) {
            let f = dec.recombine();
            for pole in &poles {
                let multiplied = f.mul(&RationalFunction::from_polynomial(Polynomial::linear(pole)));
                prop_assert_eq!(f.residue_simple(pole).unwrap(), multiplied.evaluate(pole).unwrap());
            }
        }

        #[test]
        fn interpolation_roundtrips(
            num in poly(8),
            den in poly(8).prop_filter("nonzero", |p| !p.is_zero()),
        ) {
            let f = RationalFunction::reduce(num, den).unwrap();
            let dn = f.numerator().degree().unwrap_or(0);
            let dd = f.denominator().degree().unwrap_or(0);
            let samples: Vec<_> = (0..200i64)
                .map(|k| rat(2 * k + 1, 3))
                .filter_map(|x| f.evaluate(&x).ok().map(|y| (x, y)))
                .take(dn + dd + 2)
                .collect();
            prop_assert_eq!(cauchy_interpolate(&samples, dn, dd).unwrap(), f);
        }
    }
}
