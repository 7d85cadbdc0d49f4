//! Seeded sampling of generic rational parameter points.
//!
//! Every coordinate is a ratio `a/b` of distinct coprime integers drawn
//! from `[2, 97]`. Draws that fail the genericity test are rejected; the
//! loop gives up after [`MAX_REJECTIONS`] consecutive rejections.

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{rat, BigRational};
use crate::params::ParamPoint;

pub const MAX_REJECTIONS: usize = 64;
const LOW: i64 = 2;
const HIGH: i64 = 97;

/// Deterministic stream of sample points.
pub struct Sampler {
    rng: ChaCha8Rng,
    rejections: usize,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            rejections: 0,
        }
    }

    /// Total number of draws rejected so far.
    pub fn rejections(&self) -> usize {
        self.rejections
    }

    fn ratio(&mut self) -> BigRational {
        loop {
            let a = self.rng.gen_range(LOW..=HIGH);
            let b = self.rng.gen_range(LOW..=HIGH);
            if a != b && a.gcd(&b) == 1 {
                return rat(a, b);
            }
        }
    }

    /// A point with `q, t` and one `σ`, generic for `level`.
    pub fn point(&mut self, level: usize) -> Result<ParamPoint> {
        let pt = self.point_qt(level)?;
        let sigma = self.sigma_for(&pt, level)?;
        pt.with_sigma(sigma)
    }

    /// A point with `q, t` only, generic for `level`.
    pub fn point_qt(&mut self, level: usize) -> Result<ParamPoint> {
        for _ in 0..MAX_REJECTIONS {
            let q = self.ratio();
            let t = self.ratio();
            match ParamPoint::for_level(q, t, None, level) {
                Ok(pt) => return Ok(pt),
                Err(_) => self.rejections += 1,
            }
        }
        Err(Error::NonGeneric(format!(
            "no generic (q, t) after {MAX_REJECTIONS} draws"
        )))
    }

    /// A fresh `σ` generic for `level` at the given `(q, t)`.
    pub fn sigma_for(&mut self, pt: &ParamPoint, level: usize) -> Result<BigRational> {
        for _ in 0..MAX_REJECTIONS {
            let s = self.ratio();
            let candidate = pt.clone().with_sigma(s.clone());
            if candidate.and_then(|c| c.ensure_generic(level)).is_ok() {
                return Ok(s);
            }
            self.rejections += 1;
        }
        Err(Error::NonGeneric(format!(
            "no generic σ after {MAX_REJECTIONS} draws"
        )))
    }
}

/// Sequence of distinct generic `σ` values at fixed `(q, t)`, taken from
/// `σ = k + 1/2` for `k = 1, 2, ...`; used where many nearby samples in
/// `Q` are needed.
pub fn sigma_ladder(pt: &ParamPoint, level: usize, count: usize) -> Vec<BigRational> {
    (1..)
        .map(|k| rat(2 * k + 1, 2))
        .filter(|s| {
            pt.clone()
                .with_sigma(s.clone())
                .and_then(|c| c.ensure_generic(level))
                .is_ok()
        })
        .take(count)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_points() {
        let a: Vec<_> = {
            let mut s = Sampler::new(42);
            (0..3).map(|_| s.point(3).unwrap()).collect()
        };
        let b: Vec<_> = {
            let mut s = Sampler::new(42);
            (0..3).map(|_| s.point(3).unwrap()).collect()
        };
        assert_eq!(a, b);
        let mut other = Sampler::new(43);
        assert_ne!(other.point(3).unwrap(), a[0]);
    }

    #[test]
    fn sampled_points_are_generic() {
        let mut s = Sampler::new(7);
        for _ in 0..5 {
            let pt = s.point(4).unwrap();
            pt.ensure_generic(4).unwrap();
            assert!(pt.sigma().is_some());
        }
    }

    #[test]
    fn ladder_is_distinct() {
        let pt = ParamPoint::new(rat(2, 1), rat(3, 1)).unwrap();
        let l = sigma_ladder(&pt, 3, 10);
        assert_eq!(l.len(), 10);
        for (i, a) in l.iter().enumerate() {
            assert!(l[..i].iter().all(|b| b != a));
        }
    }
}
