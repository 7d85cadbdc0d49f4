//! Rational-function reconstruction from exact samples.

use num_rational::BigRational;
use num_traits::One;

use super::linalg::null_vector;
use super::poly::Polynomial;
use super::ratfun::RationalFunction;
use crate::error::{Error, Result};

/// Reconstructs `N/D` with `deg N <= deg_num`, `deg D <= deg_den` from
/// `(x, y)` samples.
///
/// The first `deg_num + deg_den + 1` samples determine the linearised system
/// `N(x) - y D(x) = 0`; every remaining sample is held out for validation.
pub fn cauchy_interpolate(
    samples: &[(BigRational, BigRational)],
    deg_num: usize,
    deg_den: usize,
) -> Result<RationalFunction> {
    let needed = deg_num + deg_den + 1;
    if samples.len() < needed + 1 {
        return Err(Error::InvalidArgument(format!(
            "need at least {} samples, got {}",
            needed + 1,
            samples.len()
        )));
    }
    for (i, (x, _)) in samples.iter().enumerate() {
        if samples[..i].iter().any(|(y, _)| y == x) {
            return Err(Error::InvalidArgument(format!(
                "repeated sample abscissa {}",
                super::fmt_rational(x)
            )));
        }
    }
    let (fit, held_out) = samples.split_at(needed);

    let rows: Vec<Vec<BigRational>> = fit
        .iter()
        .map(|(x, y)| {
            let mut row = Vec::with_capacity(deg_num + deg_den + 2);
            let mut pw = BigRational::one();
            for _ in 0..=deg_num {
                row.push(pw.clone());
                pw *= x;
            }
            let mut pw = BigRational::one();
            for _ in 0..=deg_den {
                row.push(-(y * &pw));
                pw *= x;
            }
            row
        })
        .collect();
    let v = null_vector(&rows)
        .ok_or_else(|| Error::InterpolationFailed("trivial kernel".into()))?;
    let num = Polynomial::new(v[..=deg_num].to_vec());
    let den = Polynomial::new(v[deg_num + 1..].to_vec());
    if den.is_zero() {
        return Err(Error::InterpolationFailed("zero denominator".into()));
    }
    let f = RationalFunction::reduce(num, den)?;

    for (x, y) in samples {
        match f.evaluate(x) {
            Ok(v) if &v == y => {}
            _ => {
                let which = if held_out.iter().any(|(hx, _)| hx == x) {
                    "held-out"
                } else {
                    "fitted"
                };
                return Err(Error::DegreeBoundTooSmall(format!(
                    "{which} sample at {} not reproduced",
                    super::fmt_rational(x)
                )));
            }
        }
    }
    if f.denominator().degree().unwrap_or(0) > deg_den
        || f.numerator().degree().unwrap_or(0) > deg_num
    {
        return Err(Error::Internal("reconstruction exceeded degree bounds".into()));
    }
    Ok(f)
}
