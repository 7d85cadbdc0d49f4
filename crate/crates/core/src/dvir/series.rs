//! Structure constants of the deformed Virasoro algebra.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{pow, BigRational};
use crate::params::ParamPoint;

/// Coefficients `f_l` of `f(x) = exp(Σ_{n≥1} c_n xⁿ / n)`, with
/// `c_n = (1 − qⁿ)(1 − t⁻ⁿ)/(1 + pⁿ)`, together with the central term.
///
/// The powers `qⁿ, t⁻ⁿ` in `c_n` are required: with `(1 − q)(1 − t⁻¹)` in
/// every `c_n` the rewriting produces a non-symmetric form at level 3 and an
/// `h`-dependent Kac ratio at level 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureSeries {
    f: Vec<BigRational>,
    /// `(1 − q)(1 − t⁻¹)/(1 − p)`
    central_scale: BigRational,
    p: BigRational,
}

impl StructureSeries {
    /// Truncation at order `order`; uses `l·f_l = Σ_{k=1}^{l} c_k f_{l−k}`.
    pub fn new(order: usize, pt: &ParamPoint) -> Result<Self> {
        let one = BigRational::one();
        let p = pt.p();
        if p.is_one() {
            return Err(Error::NonGeneric("p = q/t equals 1".into()));
        }
        let mut c = vec![BigRational::zero()];
        for n in 1..=order as i64 {
            let d = &one + pow(&p, n);
            if d.is_zero() {
                return Err(Error::NonGeneric(format!("1 + p^{n} vanishes at {pt}")));
            }
            c.push((&one - pow(pt.q(), n)) * (&one - pow(pt.t(), -n)) / d);
        }
        let base = (&one - pt.q()) * (&one - pt.t().recip());
        let mut f = vec![one.clone()];
        for l in 1..=order {
            let acc: BigRational = (1..=l).map(|k| &c[k] * &f[l - k]).sum();
            f.push(acc / BigRational::from_integer(l.into()));
        }
        let central_scale = base / (&one - &p);
        Ok(Self { f, central_scale, p })
    }

    pub fn order(&self) -> usize {
        self.f.len() - 1
    }

    /// `f_l`; an order past the truncation is an engine bug.
    pub fn f(&self, l: usize) -> Result<&BigRational> {
        self.f.get(l).ok_or_else(|| {
            Error::Internal(format!("f_{l} requested beyond truncation order {}", self.order()))
        })
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.f
    }

    /// Central contribution `−(1 − q)(1 − t⁻¹)(pʳ − p⁻ʳ)/(1 − p)` to `[T_r, T_{−r}]`.
    pub fn central(&self, r: i64) -> BigRational {
        -(&self.central_scale * (pow(&self.p, r) - pow(&self.p, -r)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    /// `exp(S)` with `S` truncated, expanded as `Σ_m S^m / m!`.
    fn exp_oracle(c: &[BigRational], order: usize) -> Vec<BigRational> {
        let mut s = vec![BigRational::zero(); order + 1];
        for n in 1..=order {
            s[n] = &c[n] / BigRational::from_integer((n as i64).into());
        }
        let mut result = vec![BigRational::zero(); order + 1];
        let mut power = vec![BigRational::zero(); order + 1];
        power[0] = BigRational::one();
        let mut factorial = BigRational::one();
        for m in 0..=order {
            if m > 0 {
                let mut next = vec![BigRational::zero(); order + 1];
                for i in 0..=order {
                    for j in 0..=order - i {
                        next[i + j] += &power[i] * &s[j];
                    }
                }
                power = next;
                factorial *= BigRational::from_integer((m as i64).into());
            }
            for i in 0..=order {
                result[i] += &power[i] / &factorial;
            }
        }
        result
    }

    #[test]
    fn low_orders() {
        let pt = ParamPoint::new(rat(2, 1), rat(3, 1)).unwrap();
        let fs = StructureSeries::new(4, &pt).unwrap();
        assert_eq!(fs.f(0).unwrap(), &rat(1, 1));
        assert_eq!(fs.f(1).unwrap(), &rat(-2, 5));
        let c = |n: i64| {
            (rat(1, 1) - pow(&rat(2, 1), n)) * (rat(1, 1) - pow(&rat(3, 1), -n)) / (rat(1, 1) + pow(&rat(2, 3), n))
        };
        assert_eq!(fs.f(2).unwrap(), &(c(2) / rat(2, 1) + c(1) * c(1) / rat(2, 1)));
        // c₂ = (−3)(8/9)/(13/9) = −24/13, f₂ = −12/13 + 2/25
        assert_eq!(fs.f(2).unwrap(), &rat(-274, 325));
        assert!(fs.f(5).is_err());
    }

    #[test]
    fn matches_exponential_expansion() {
        let pt = ParamPoint::new(rat(5, 7), rat(11, 3)).unwrap();
        let order = 7;
        let fs = StructureSeries::new(order, &pt).unwrap();
        let one = rat(1, 1);
        let mut c = vec![rat(0, 1)];
        for n in 1..=order as i64 {
            c.push((&one - pow(pt.q(), n)) * (&one - pow(pt.t(), -n)) / (&one + pow(&pt.p(), n)));
        }
        assert_eq!(fs.coefficients(), exp_oracle(&c, order).as_slice());
    }

    #[test]
    fn central_term() {
        let pt = ParamPoint::new(rat(2, 1), rat(3, 1)).unwrap();
        let fs = StructureSeries::new(1, &pt).unwrap();
        // −(−1)(2/3)(2/3 − 3/2)/(1/3)
        assert_eq!(fs.central(1), rat(-5, 3));
        assert_eq!(fs.central(0), rat(0, 1));
        assert_eq!(fs.central(-2), -fs.central(2));
    }

    #[test]
    fn rejects_root_of_minus_one() {
        let pt = ParamPoint::new(rat(-3, 1), rat(3, 1)).unwrap();
        assert!(StructureSeries::new(2, &pt).unwrap_err().is_non_generic());
    }
}
