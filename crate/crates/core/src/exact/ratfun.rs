//! Reduced rational functions in the single variable `Q`.
//!
//! Canonical form: monic denominator, numerator and denominator coprime,
//! zero stored as `0/1`. Two functions are equal iff their representations
//! are equal.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::Polynomial;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

/// Simple-pole expansion `sum residue / (Q - pole) + polynomial_part`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleDecomposition {
    pub terms: Vec<(BigRational, BigRational)>,
    pub polynomial_part: Polynomial,
}

/// Root multiplicities found among a candidate list, plus whatever part of
/// the polynomial did not split over the candidates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSplit {
    pub roots: Vec<(BigRational, usize)>,
    pub remainder: Polynomial,
}

impl RationalFunction {
    /// Builds `num / den` in reduced form.
    pub fn reduce(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZeroPolynomial);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let lc = den.leading().cloned().expect("nonzero denominator");
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(Self { num, den })
    }

    /// Builds `num / prod (Q - r)^m` when the denominator's roots are known.
    ///
    /// Reduction only tests the listed roots, so no polynomial gcd is run.
    pub fn over_roots(mut num: Polynomial, roots: &BTreeMap<BigRational, usize>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let mut den = Polynomial::one();
        for (root, &mult) in roots {
            let mut left = mult;
            while left > 0 {
                let (quot, rem) = num.div_linear(root);
                if !rem.is_zero() {
                    break;
                }
                num = quot;
                left -= 1;
            }
            for _ in 0..left {
                den = den.mul_linear(root);
            }
        }
        Self { num, den }
    }

    pub fn zero() -> Self {
        Self {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self {
            num: Polynomial::constant(c),
            den: Polynomial::one(),
        }
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        Self {
            num: p,
            den: Polynomial::one(),
        }
    }

    /// `c / (Q - pole)`.
    pub fn simple_pole(c: BigRational, pole: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            num: Polynomial::constant(c),
            den: Polynomial::linear(pole),
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn evaluate(&self, x: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::PoleAt(x.clone()));
        }
        Ok(self.num.eval(x) / d)
    }

    /// Residue at a simple pole: `N(x0) / D~(x0)` with `D = (Q - x0) D~`.
    pub fn residue_simple(&self, x0: &BigRational) -> Result<BigRational> {
        let (reduced, rem) = self.den.div_linear(x0);
        if !rem.is_zero() {
            return Err(Error::NotAPole(x0.clone()));
        }
        let rest = reduced.eval(x0);
        if rest.is_zero() {
            return Err(Error::HigherOrderPole {
                location: x0.clone(),
                multiplicity: self.den.root_multiplicity(x0),
            });
        }
        Ok(self.num.eval(x0) / rest)
    }

    /// Simple-pole expansion over a caller-supplied candidate pole list.
    pub fn partial_fractions(&self, candidates: &[BigRational]) -> Result<PoleDecomposition> {
        let (polynomial_part, _) = self.num.div_rem(&self.den);
        let split = split_roots(&self.den, candidates);
        if let Some((loc, mult)) = split.roots.iter().find(|(_, m)| *m > 1) {
            return Err(Error::HigherOrderPole {
                location: loc.clone(),
                multiplicity: *mult,
            });
        }
        if !split.remainder.is_constant() {
            return Err(Error::Unfactored {
                remainder: split.remainder.to_string(),
            });
        }
        let terms = split
            .roots
            .iter()
            .map(|(loc, _)| Ok((loc.clone(), self.residue_simple(loc)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(PoleDecomposition {
            terms,
            polynomial_part,
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::reduce(&self.num + &other.num, self.den.clone())
                .expect("monic denominator");
        }
        Self::reduce(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
        )
        .expect("product of nonzero denominators")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::reduce(&self.num * &other.num, &self.den * &other.den)
            .expect("product of nonzero denominators")
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZeroPolynomial);
        }
        Self::reduce(&self.num * &other.den, &self.den * &other.num)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// `f(1/Q)` in reduced form.
    pub fn invert_argument(&self) -> Self {
        // Reverse coefficient lists after padding to a common degree.
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        let d = dn.max(dd);
        let reverse = |p: &Polynomial| {
            let mut c = p.coeffs().to_vec();
            c.resize(d + 1, BigRational::zero());
            c.reverse();
            Polynomial::new(c)
        };
        Self::reduce(reverse(&self.num), reverse(&self.den)).expect("nonzero denominator")
    }
}

impl PoleDecomposition {
    /// Recombines the expansion into a single reduced function.
    pub fn recombine(&self) -> RationalFunction {
        let mut roots = BTreeMap::new();
        for (pole, _) in &self.terms {
            *roots.entry(pole.clone()).or_insert(0) += 1;
        }
        let all = Polynomial::from_roots(roots.keys());
        let mut num = &self.polynomial_part * &all;
        for (pole, residue) in &self.terms {
            let (cofactor, _) = all.div_linear(pole);
            num = &num + &cofactor.scale(residue);
        }
        RationalFunction::over_roots(num, &roots)
    }
}

/// Divides out every candidate root of `p` with its multiplicity.
pub fn split_roots(p: &Polynomial, candidates: &[BigRational]) -> RootSplit {
    let mut remainder = p.clone();
    let mut roots = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for c in candidates {
        if !seen.insert(c.clone()) {
            continue;
        }
        let mut mult = 0;
        loop {
            if remainder.is_constant() {
                break;
            }
            let (q, r) = remainder.div_linear(c);
            if !r.is_zero() {
                break;
            }
            remainder = q;
            mult += 1;
        }
        if mult > 0 {
            roots.push((c.clone(), mult));
        }
    }
    RootSplit { roots, remainder }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn p(cs: &[i64]) -> Polynomial {
        Polynomial::new(cs.iter().map(|&c| rat(c, 1)).collect())
    }

    fn inv_linear_product(roots: &[i64]) -> RationalFunction {
        let den = roots
            .iter()
            .fold(Polynomial::one(), |acc, &r| acc.mul_linear(&rat(r, 1)));
        RationalFunction::reduce(Polynomial::one(), den).unwrap()
    }

    #[test]
    fn reduce_cancels_common_factor() {
        let f = RationalFunction::reduce(p(&[-1, 0, 1]), p(&[-1, 1])).unwrap();
        assert_eq!(f, RationalFunction::from_polynomial(p(&[1, 1])));
        let f = RationalFunction::reduce(p(&[0, 1]), p(&[1])).unwrap();
        assert_eq!(f, RationalFunction::from_polynomial(Polynomial::x()));
        // (3Q+3)/(2Q+2) = 3/2
        let f = RationalFunction::reduce(p(&[3, 3]), p(&[2, 2])).unwrap();
        assert_eq!(f, RationalFunction::constant(rat(3, 2)));
    }

    #[test]
    fn reduce_rejects_zero_denominator() {
        let err = RationalFunction::reduce(p(&[1]), Polynomial::zero()).unwrap_err();
        assert_eq!(err.to_string(), "division by zero polynomial");
    }

    #[test]
    fn evaluate_and_pole_error() {
        let f = inv_linear_product(&[1]);
        assert_eq!(f.evaluate(&rat(3, 1)).unwrap(), rat(1, 2));
        assert_eq!(
            RationalFunction::from_polynomial(p(&[1, 1]))
                .evaluate(&rat(0, 1))
                .unwrap(),
            rat(1, 1)
        );
        let err = f.evaluate(&rat(1, 1)).unwrap_err();
        assert_eq!(err, Error::PoleAt(rat(1, 1)));
        assert_eq!(err.to_string(), "pole at 1");
    }

    #[test]
    fn residues() {
        assert_eq!(
            inv_linear_product(&[1, 2]).residue_simple(&rat(1, 1)).unwrap(),
            rat(-1, 1)
        );
        let f = RationalFunction::reduce(p(&[5]), p(&[-3, 1])).unwrap();
        assert_eq!(f.residue_simple(&rat(3, 1)).unwrap(), rat(5, 1));
        let err = inv_linear_product(&[1, 1])
            .residue_simple(&rat(1, 1))
            .unwrap_err();
        assert!(matches!(err, Error::HigherOrderPole { multiplicity: 2, .. }));
        assert!(err.to_string().starts_with("higher-order pole"));
        assert!(matches!(
            f.residue_simple(&rat(4, 1)),
            Err(Error::NotAPole(_))
        ));
    }

    #[test]
    fn partial_fraction_examples() {
        let cands = [rat(1, 1), rat(2, 1), rat(7, 1)];
        let d = inv_linear_product(&[1, 2]).partial_fractions(&cands).unwrap();
        assert_eq!(d.terms, vec![(rat(1, 1), rat(-1, 1)), (rat(2, 1), rat(1, 1))]);
        assert!(d.polynomial_part.is_zero());

        let d = RationalFunction::from_polynomial(Polynomial::x())
            .partial_fractions(&cands)
            .unwrap();
        assert!(d.terms.is_empty());
        assert_eq!(d.polynomial_part, Polynomial::x());

        let f = RationalFunction::reduce(p(&[-3, 2]), p(&[2, -3, 1])).unwrap();
        let d = f.partial_fractions(&cands).unwrap();
        assert_eq!(d.terms, vec![(rat(1, 1), rat(1, 1)), (rat(2, 1), rat(1, 1))]);
        assert_eq!(d.recombine(), f);
    }

    #[test]
    fn partial_fraction_errors() {
        let f = RationalFunction::reduce(p(&[1]), p(&[-2, 0, 1])).unwrap();
        assert!(matches!(
            f.partial_fractions(&[rat(1, 1)]),
            Err(Error::Unfactored { .. })
        ));
        let f = inv_linear_product(&[3, 3]);
        assert!(matches!(
            f.partial_fractions(&[rat(3, 1)]),
            Err(Error::HigherOrderPole { .. })
        ));
    }

    #[test]
    fn over_roots_matches_gcd_reduction() {
        // (Q-1)(Q+2) / ((Q-1)^2 (Q-3))
        let num = p(&[-1, 1]).mul_linear(&rat(-2, 1));
        let mut roots = BTreeMap::new();
        roots.insert(rat(1, 1), 2);
        roots.insert(rat(3, 1), 1);
        let den = Polynomial::from_roots([rat(1, 1), rat(1, 1), rat(3, 1)].iter());
        assert_eq!(
            RationalFunction::over_roots(num.clone(), &roots),
            RationalFunction::reduce(num, den).unwrap()
        );
    }

    #[test]
    fn invert_argument() {
        // f = 1/(Q-2) -> f(1/Q) = Q/(1-2Q) = (-1/2) Q / (Q - 1/2)
        let f = inv_linear_product(&[2]);
        let g = f.invert_argument();
        assert_eq!(g.evaluate(&rat(5, 1)).unwrap(), f.evaluate(&rat(1, 5)).unwrap());
        assert_eq!(g.denominator(), &Polynomial::linear(&rat(1, 2)));
    }
}
