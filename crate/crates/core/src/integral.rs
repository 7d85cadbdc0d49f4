//! Iterated-residue evaluation of the contour-integral form of `Z_{λ,μ}`.
//!
//! The integrand in `n` variables is
//!
//! ```text
//! c^n ∏_k P(x_k; σ, q⁻¹t) ∏_{i<k} ω(x_k / x_i; q, t⁻¹, q⁻¹t),   c = (1 − q t⁻¹)/((1 − q)(1 − t⁻¹))
//! P(x; a, p)        = x / ((x − a)(x − a⁻¹)(x − p a)(x − p a⁻¹))
//! ω(y; q₁, q₂, q₃) = (y − 1)² (y − q₃)(y − q₃⁻¹) / ((y − q₁)(y − q₁⁻¹)(y − q₂)(y − q₂⁻¹))
//! ```
//!
//! Each pair `(λ, μ)` fixes one pole per variable: the box `(i, j)` of `λ`
//! sits at `σ q^{j−1} t^{1−i}` and the box `(i, j)` of `μ` at
//! `σ⁻¹ q^{j−1} t^{1−i}`. Residues are taken one variable at a time. When
//! `x_k` is processed every earlier variable is already a number, and every
//! factor coupling `x_k` to a later variable is regular at the target, so the
//! step only sees `P(x_k) ∏_{i<k} ω(x_k / v_i)`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{fmt_rational, BigRational};
use crate::nekrasov::z_level_value;
use crate::params::ParamPoint;
use crate::partitions::{pairs_of_total, Cell, Partition};

/// Which diagram a pole comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

/// One box of `λ` (left) or `μ` (right).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoxRef {
    pub side: Side,
    pub cell: Cell,
}

/// Pole values assigned to the integration variables, in processing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleAssignment {
    pub values: Vec<BigRational>,
    pub boxes: Vec<BoxRef>,
    pub lambda: Partition,
    pub mu: Partition,
}

fn box_value(b: BoxRef, sigma: &BigRational, pt: &ParamPoint) -> BigRational {
    let base = match b.side {
        Side::Left => sigma.clone(),
        Side::Right => sigma.recip(),
    };
    base * pt.monomial(b.cell.j as i64 - 1, -(b.cell.i as i64 - 1))
}

/// Row-major boxes of `λ` followed by row-major boxes of `μ`.
pub fn canonical_order(lambda: &Partition, mu: &Partition) -> Vec<BoxRef> {
    lambda
        .cells()
        .map(|cell| BoxRef { side: Side::Left, cell })
        .chain(mu.cells().map(|cell| BoxRef { side: Side::Right, cell }))
        .collect()
}

impl PoleAssignment {
    pub fn new(lambda: &Partition, mu: &Partition, pt: &ParamPoint) -> Result<Self> {
        Self::with_order(lambda, mu, canonical_order(lambda, mu), pt)
    }

    /// Assignment with an explicit box order. The order must list each box
    /// once and place every box after the boxes above and to its left.
    pub fn with_order(lambda: &Partition, mu: &Partition, boxes: Vec<BoxRef>, pt: &ParamPoint) -> Result<Self> {
        if !is_admissible(lambda, mu, &boxes) {
            return Err(Error::InvalidArgument(format!(
                "box order is not admissible for λ={lambda}, μ={mu}"
            )));
        }
        let sigma = pt.require_sigma()?;
        let values: Vec<BigRational> = boxes.iter().map(|&b| box_value(b, sigma, pt)).collect();
        for (k, v) in values.iter().enumerate() {
            if values[..k].contains(v) {
                return Err(Error::NonGeneric(format!(
                    "two poles coincide at {} for λ={lambda}, μ={mu}",
                    fmt_rational(v)
                )));
            }
        }
        Ok(Self {
            values,
            boxes,
            lambda: lambda.clone(),
            mu: mu.clone(),
        })
    }
}

fn is_admissible(lambda: &Partition, mu: &Partition, order: &[BoxRef]) -> bool {
    if order.len() != lambda.size() + mu.size() {
        return false;
    }
    let diagram = |side| match side {
        Side::Left => lambda,
        Side::Right => mu,
    };
    for (k, b) in order.iter().enumerate() {
        if !diagram(b.side).contains(b.cell) || order[..k].contains(b) {
            return false;
        }
        let (i, j) = (b.cell.i, b.cell.j);
        let seen = |cell: Cell| order[..k].contains(&BoxRef { side: b.side, cell });
        if (i > 1 && !seen(Cell::new(i - 1, j))) || (j > 1 && !seen(Cell::new(i, j - 1))) {
            return false;
        }
    }
    true
}

/// `scalar · ∏ (x − root)^exponent` in one variable `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivariateFactorList {
    pub scalar: BigRational,
    pub factors: BTreeMap<BigRational, i64>,
}

impl UnivariateFactorList {
    pub fn constant(scalar: BigRational) -> Self {
        Self {
            scalar,
            factors: BTreeMap::new(),
        }
    }

    fn push(&mut self, root: BigRational, exponent: i64) {
        let e = self.factors.entry(root.clone()).or_insert(0);
        *e += exponent;
        if *e == 0 {
            self.factors.remove(&root);
        }
    }

    /// Product; matching linear factors cancel.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.scalar *= &other.scalar;
        for (root, &e) in &other.factors {
            out.push(root.clone(), e);
        }
        out
    }

    /// Net exponent of `(x − root)`.
    pub fn order_at(&self, root: &BigRational) -> i64 {
        self.factors.get(root).copied().unwrap_or(0)
    }

    pub fn evaluate(&self, x: &BigRational) -> Result<BigRational> {
        let mut value = self.scalar.clone();
        for (root, &e) in &self.factors {
            let d = x - root;
            if d.is_zero() {
                if e < 0 {
                    return Err(Error::PoleAt(x.clone()));
                }
                return Ok(BigRational::zero());
            }
            value *= crate::exact::pow(&d, e);
        }
        Ok(value)
    }

    /// Residue at a simple pole; `step` labels the error.
    pub fn simple_residue(&self, x0: &BigRational, step: usize) -> Result<BigRational> {
        let order = -self.order_at(x0);
        if order != 1 {
            return Err(Error::NonSimplePole {
                step,
                location: x0.clone(),
                order,
            });
        }
        let mut rest = self.clone();
        rest.factors.remove(x0);
        rest.evaluate(x0).map_err(|_| {
            Error::Internal(format!("residual pole at {} after removal", fmt_rational(x0)))
        })
    }
}

/// `P(x; a, p)` as a factor list in `x`.
pub fn p_factor(a: &BigRational, p: &BigRational) -> Result<UnivariateFactorList> {
    if a.is_zero() || p.is_zero() {
        return Err(Error::InvalidArgument("P(x; a, p) needs a, p ≠ 0".into()));
    }
    let mut out = UnivariateFactorList::constant(BigRational::one());
    out.push(BigRational::zero(), 1);
    for root in [a.clone(), a.recip(), p * a, p * a.recip()] {
        out.push(root, -1);
    }
    Ok(out)
}

fn check_nonzero(qs: [&BigRational; 3]) -> Result<()> {
    if qs.iter().any(|q| q.is_zero()) {
        return Err(Error::InvalidArgument("ω needs q₁, q₂, q₃ ≠ 0".into()));
    }
    Ok(())
}

/// `ω(x / v; q₁, q₂, q₃)` as a factor list in `x`. The powers of `v` cancel
/// because numerator and denominator both have degree four.
pub fn omega_factor(
    v: &BigRational,
    q1: &BigRational,
    q2: &BigRational,
    q3: &BigRational,
) -> Result<UnivariateFactorList> {
    check_nonzero([q1, q2, q3])?;
    if v.is_zero() {
        return Err(Error::InvalidArgument("ω(x / v) needs v ≠ 0".into()));
    }
    let mut out = UnivariateFactorList::constant(BigRational::one());
    out.push(v.clone(), 2);
    out.push(v * q3, 1);
    out.push(v * q3.recip(), 1);
    for root in [q1.clone(), q1.recip(), q2.clone(), q2.recip()] {
        out.push(v * root, -1);
    }
    Ok(out)
}

/// `ω(y; q₁, q₂, q₃)` at a number.
pub fn omega_value(y: &BigRational, q1: &BigRational, q2: &BigRational, q3: &BigRational) -> Result<BigRational> {
    check_nonzero([q1, q2, q3])?;
    let one = BigRational::one();
    let poles = [("q₁", q1.clone()), ("q₁⁻¹", q1.recip()), ("q₂", q2.clone()), ("q₂⁻¹", q2.recip())];
    let mut den = one.clone();
    for (name, root) in &poles {
        let d = y - root;
        if d.is_zero() {
            return Err(Error::NonGeneric(format!("pole: y={name} at y={}", fmt_rational(y))));
        }
        den *= d;
    }
    let num = (y - &one) * (y - &one) * (y - q3) * (y - q3.recip());
    Ok(num / den)
}

/// The per-variable constant `(1 − q t⁻¹)/((1 − q)(1 − t⁻¹))`.
pub fn measure_constant(pt: &ParamPoint) -> Result<BigRational> {
    let one = BigRational::one();
    let den = (&one - pt.q()) * (&one - pt.t().recip());
    if den.is_zero() {
        return Err(Error::NonGeneric(format!("measure constant is singular at {pt}")));
    }
    Ok((&one - pt.p()) / den)
}

/// Residue sequence for a fixed assignment.
pub fn residue_of_assignment(assignment: &PoleAssignment, pt: &ParamPoint) -> Result<BigRational> {
    let sigma = pt.require_sigma()?;
    let (q, t) = (pt.q(), pt.t());
    let (q2, q3) = (t.recip(), t / q);
    let c = measure_constant(pt)?;
    let p_part = p_factor(sigma, &q3)?;
    let mut value = BigRational::one();
    for (k, x0) in assignment.values.iter().enumerate() {
        let mut f = p_part.clone();
        for v in &assignment.values[..k] {
            f = f.mul(&omega_factor(v, q, &q2, &q3)?);
        }
        value *= &c * f.simple_residue(x0, k + 1)?;
    }
    Ok(value)
}

/// `I_{λ,μ}` with the canonical box order.
pub fn iterated_residue(lambda: &Partition, mu: &Partition, pt: &ParamPoint) -> Result<BigRational> {
    residue_of_assignment(&PoleAssignment::new(lambda, mu, pt)?, pt)
}

/// `I_{λ,μ}` with a caller-chosen admissible box order.
pub fn iterated_residue_with_order(
    lambda: &Partition,
    mu: &Partition,
    order: Vec<BoxRef>,
    pt: &ParamPoint,
) -> Result<BigRational> {
    residue_of_assignment(&PoleAssignment::with_order(lambda, mu, order, pt)?, pt)
}

/// Every admissible box order of `(λ, μ)`.
pub fn admissible_orders(lambda: &Partition, mu: &Partition) -> Vec<Vec<BoxRef>> {
    let all = canonical_order(lambda, mu);
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(all.len());
    extend_orders(&all, &mut current, &mut out);
    out
}

fn extend_orders(all: &[BoxRef], current: &mut Vec<BoxRef>, out: &mut Vec<Vec<BoxRef>>) {
    if current.len() == all.len() {
        out.push(current.clone());
        return;
    }
    for b in all {
        if current.contains(b) {
            continue;
        }
        let (i, j) = (b.cell.i, b.cell.j);
        let seen = |cell: Cell| current.contains(&BoxRef { side: b.side, cell });
        if (i > 1 && !seen(Cell::new(i - 1, j))) || (j > 1 && !seen(Cell::new(i, j - 1))) {
            continue;
        }
        current.push(*b);
        extend_orders(all, current, out);
        current.pop();
    }
}

/// `Σ_{|λ|+|μ|=n} I_{λ,μ}`.
pub fn level_sum_via_residues(n: usize, pt: &ParamPoint) -> Result<BigRational> {
    pairs_of_total(n)
        .par_iter()
        .map(|(l, m)| iterated_residue(l, m, pt))
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().sum())
}

/// `(Σ I_{λ,μ}, Z_n(σ²))`.
pub fn level_check(n: usize, pt: &ParamPoint) -> Result<(BigRational, BigRational)> {
    let lhs = level_sum_via_residues(n, pt)?;
    let rhs = z_level_value(n, &pt.big_q()?, pt)?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::nekrasov::z_pair;

    fn pt(q: (i64, i64), t: (i64, i64), s: (i64, i64)) -> ParamPoint {
        ParamPoint::new(rat(q.0, q.1), rat(t.0, t.1))
            .unwrap()
            .with_sigma(rat(s.0, s.1))
            .unwrap()
    }

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn p_factor_shape() {
        let f = p_factor(&rat(2, 1), &rat(3, 2)).unwrap();
        let roots: Vec<_> = f.factors.iter().filter(|(_, &e)| e == -1).map(|(r, _)| r.clone()).collect();
        assert_eq!(roots, vec![rat(1, 2), rat(3, 4), rat(2, 1), rat(3, 1)]);
        assert_eq!(f.order_at(&rat(0, 1)), 1);
        assert_eq!(f.evaluate(&rat(0, 1)).unwrap(), rat(0, 1));
        // x / ((x − 2)(x − 1/2)(x − 3)(x − 3/4)) at x = 4
        let x = rat(4, 1);
        let direct = &x / ((&x - rat(2, 1)) * (&x - rat(1, 2)) * (&x - rat(3, 1)) * (&x - rat(3, 4)));
        assert_eq!(f.evaluate(&x).unwrap(), direct);
        assert!(p_factor(&rat(0, 1), &rat(1, 2)).is_err());
    }

    #[test]
    fn omega_values() {
        let (q1, q2, q3) = (rat(2, 1), rat(1, 3), rat(3, 2));
        assert_eq!(omega_value(&rat(1, 1), &q1, &q2, &q3).unwrap(), rat(0, 1));
        assert_eq!(omega_value(&q3, &q1, &q2, &q3).unwrap(), rat(0, 1));
        let err = omega_value(&rat(2, 1), &q1, &q2, &q3).unwrap_err();
        assert!(err.to_string().contains("pole: y=q₁"));
        // ω(y) = ω(1/y)
        let y = rat(5, 7);
        assert_eq!(
            omega_value(&y, &q1, &q2, &q3).unwrap(),
            omega_value(&y.recip(), &q1, &q2, &q3).unwrap()
        );
    }

    #[test]
    fn omega_factor_matches_value() {
        let (q1, q2, q3) = (rat(2, 1), rat(1, 3), rat(3, 2));
        let v = rat(7, 5);
        let f = omega_factor(&v, &q1, &q2, &q3).unwrap();
        for x in [rat(11, 3), rat(-2, 9)] {
            assert_eq!(f.evaluate(&x).unwrap(), omega_value(&(&x / &v), &q1, &q2, &q3).unwrap());
        }
    }

    #[test]
    fn empty_pair_is_one() {
        let p = pt((2, 1), (3, 1), (2, 1));
        let e = Partition::empty();
        assert_eq!(iterated_residue(&e, &e, &p).unwrap(), rat(1, 1));
        assert_eq!(level_sum_via_residues(0, &p).unwrap(), rat(1, 1));
    }

    #[test]
    fn single_box_matches_closed_form() {
        let p = pt((2, 1), (3, 1), (2, 1));
        let (q, t, big_q) = (p.q().clone(), p.t().clone(), p.big_q().unwrap());
        let one = rat(1, 1);
        let closed = ((&t - &one) * (q.recip() - &one) * (&one - &big_q) * (&one - q.recip() * &t / &big_q)).recip();
        let got = iterated_residue(&part(&[1]), &Partition::empty(), &p).unwrap();
        assert_eq!(got, closed);
    }

    #[test]
    fn pairs_match_direct_sum() {
        // Q = q² is generic only up to level 2.
        let cases = [(pt((2, 1), (3, 1), (2, 1)), 2), (pt((5, 3), (7, 11), (9, 4)), 3)];
        for (p, top) in cases {
            for n in 0..=top {
                for (l, m) in pairs_of_total(n) {
                    let i = iterated_residue(&l, &m, &p).unwrap();
                    let z = z_pair(&l, &m, &p.big_q().unwrap(), &p).unwrap();
                    assert_eq!(i, z, "λ={l}, μ={m} at {p}");
                }
                let (lhs, rhs) = level_check(n, &p).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn order_independence() {
        let p = pt((3, 2), (5, 7), (11, 3));
        for n in 1..=3 {
            for (l, m) in pairs_of_total(n) {
                let reference = iterated_residue(&l, &m, &p).unwrap();
                let orders = admissible_orders(&l, &m);
                assert!(!orders.is_empty());
                for order in orders {
                    assert_eq!(iterated_residue_with_order(&l, &m, order, &p).unwrap(), reference);
                }
            }
        }
    }

    #[test]
    fn cancellation_is_required() {
        // Second box of a row: the ω numerator cancels the P pole at σ.
        let p = pt((2, 1), (3, 1), (2, 1));
        let a = PoleAssignment::new(&part(&[2]), &Partition::empty(), &p).unwrap();
        assert_eq!(a.values, vec![rat(2, 1), rat(4, 1)]);
        let (q, t) = (p.q(), p.t());
        let f = p_factor(&rat(2, 1), &(t / q))
            .unwrap()
            .mul(&omega_factor(&rat(2, 1), q, &t.recip(), &(t / q)).unwrap());
        assert_eq!(f.order_at(&rat(2, 1)), 1);
        assert_eq!(f.order_at(&rat(4, 1)), -1);
    }

    #[test]
    fn inadmissible_order_rejected() {
        let p = pt((2, 1), (3, 1), (2, 1));
        let l = part(&[2]);
        let mut order = canonical_order(&l, &Partition::empty());
        order.reverse();
        assert!(iterated_residue_with_order(&l, &Partition::empty(), order, &p).is_err());
    }

    #[test]
    fn wrong_target_is_not_simple() {
        let f = p_factor(&rat(2, 1), &rat(3, 2)).unwrap();
        let err = f.simple_residue(&rat(5, 1), 1).unwrap_err();
        assert!(matches!(err, Error::NonSimplePole { step: 1, order: 0, .. }));
    }
}
