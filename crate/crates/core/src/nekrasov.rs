//! K-theoretic pure SU(2) instanton sums and their recursion in `Q`.
//!
//! ```text
//! N_{λ,μ}(Q) = ∏_{(i,j)∈μ} (1 − Q q^{λ_i−j} t^{μ'_j−i+1})
//!            · ∏_{(i,j)∈λ} (1 − Q q^{−μ_i+j−1} t^{−λ'_j+i})
//! Z_{λ,μ}(Q) = 1 / (N_{λ,λ}(1) N_{μ,μ}(1) N_{λ,μ}(Q) N_{μ,λ}(Q⁻¹))
//! Z_n(Q)     = Σ_{|λ|+|μ|=n} Z_{λ,μ}(Q)
//! ```
//!
//! `Z_n` is assembled as an exact rational function of `Q` at fixed rational
//! `(q, t)`. The recursion kernel is
//!
//! ```text
//! G(r,s) = −sgn(r) q^r t^{−s} ∏_{(i,j)≠(0,0), −|r|≤i<|r|, −|s|≤j<|s|} 1/(1 − q^i t^{−j})
//! ```
//!
//! and the recursion reads
//! `Z_n(Q) = δ_{n,0} + Σ_{1≤rs≤n} G(r,s) Z_{n−rs}(q^r t^s) / (Q − q^r t^{−s})`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{fmt_rational, BigRational, Polynomial, RationalFunction};
use crate::params::ParamPoint;
use crate::partitions::{pairs_of_total, Partition};

/// Index `(r, s)` of a pole `Q = q^r t^{−s}`; `r` and `s` share a sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolePair {
    pub r: i64,
    pub s: i64,
}

impl PolePair {
    pub fn new(r: i64, s: i64) -> Result<Self> {
        if r * s < 1 {
            return Err(Error::InvalidArgument(format!(
                "pole index needs r·s ≥ 1, got ({r}, {s})"
            )));
        }
        Ok(Self { r, s })
    }

    /// All pairs with `1 ≤ rs ≤ n`, positive ones first.
    pub fn up_to(n: usize) -> Vec<Self> {
        let n = n as i64;
        let mut out = Vec::new();
        for sign in [1, -1] {
            for r in 1..=n {
                for s in 1..=n / r {
                    out.push(Self {
                        r: sign * r,
                        s: sign * s,
                    });
                }
            }
        }
        out
    }

    pub fn product(&self) -> usize {
        (self.r * self.s) as usize
    }

    /// Pole location `q^r t^{−s}`.
    pub fn location(&self, pt: &ParamPoint) -> BigRational {
        pt.monomial(self.r, -self.s)
    }

    /// Shifted argument `q^r t^{s}` at which the lower level is evaluated.
    pub fn shifted(&self, pt: &ParamPoint) -> BigRational {
        pt.monomial(self.r, self.s)
    }
}

/// Candidate pole set `{q^r t^{−s} : 1 ≤ rs ≤ n}`.
pub fn pole_grid(n: usize, pt: &ParamPoint) -> Vec<BigRational> {
    PolePair::up_to(n).iter().map(|pp| pp.location(pt)).collect()
}

/// Exponents `(a, b)` such that `N_{λ,μ}(Q) = ∏ (1 − Q q^a t^b)`.
pub fn n_exponents(lambda: &Partition, mu: &Partition) -> Vec<(i64, i64)> {
    let mut out = Vec::with_capacity(lambda.size() + mu.size());
    for c in mu.cells() {
        let a = lambda.part(c.i) as i64 - c.j as i64;
        let b = mu.conjugate_part(c.j) as i64 - c.i as i64 + 1;
        out.push((a, b));
    }
    for c in lambda.cells() {
        let a = -(mu.part(c.i) as i64) + c.j as i64 - 1;
        let b = -(lambda.conjugate_part(c.j) as i64) + c.i as i64;
        out.push((a, b));
    }
    out
}

/// `N_{λ,μ}(Q)` at a numeric `Q`.
pub fn n_factor(lambda: &Partition, mu: &Partition, q_val: &BigRational, pt: &ParamPoint) -> BigRational {
    n_exponents(lambda, mu)
        .into_iter()
        .map(|(a, b)| BigRational::one() - q_val * pt.monomial(a, b))
        .product()
}

/// `Z_{λ,μ}` at a numeric `Q`.
pub fn z_pair(lambda: &Partition, mu: &Partition, q_val: &BigRational, pt: &ParamPoint) -> Result<BigRational> {
    if q_val.is_zero() {
        return Err(Error::NonGeneric("Q = 0".into()));
    }
    let one = BigRational::one();
    let q_inv = q_val.recip();
    let factors = [
        ("N_{λ,λ}(1)", n_factor(lambda, lambda, &one, pt)),
        ("N_{μ,μ}(1)", n_factor(mu, mu, &one, pt)),
        ("N_{λ,μ}(Q)", n_factor(lambda, mu, q_val, pt)),
        ("N_{μ,λ}(Q⁻¹)", n_factor(mu, lambda, &q_inv, pt)),
    ];
    let mut denom = BigRational::one();
    for (name, v) in factors {
        if v.is_zero() {
            return Err(Error::NonGeneric(format!(
                "{name} vanishes for λ={lambda}, μ={mu} at Q={}, {pt}",
                fmt_rational(q_val)
            )));
        }
        denom *= v;
    }
    Ok(denom.recip())
}

/// `Z_{λ,μ}(Q) = scale · Q^n / ∏ (Q − root)` in root form.
struct PairTerm {
    scale: BigRational,
    q_power: usize,
    roots: BTreeMap<BigRational, usize>,
}

fn pair_term(lambda: &Partition, mu: &Partition, pt: &ParamPoint) -> Result<PairTerm> {
    let one = BigRational::one();
    let k = n_factor(lambda, lambda, &one, pt) * n_factor(mu, mu, &one, pt);
    if k.is_zero() {
        return Err(Error::NonGeneric(format!(
            "N(1) factor vanishes for λ={lambda}, μ={mu} at {pt}"
        )));
    }
    let mut scale = k.recip();
    let mut roots = BTreeMap::new();
    // 1 − cQ = −c (Q − 1/c)
    for (a, b) in n_exponents(lambda, mu) {
        let c = pt.monomial(a, b);
        scale /= -&c;
        *roots.entry(c.recip()).or_insert(0) += 1;
    }
    // 1 − d/Q = (Q − d)/Q
    let inverse = n_exponents(mu, lambda);
    let q_power = inverse.len();
    for (a, b) in inverse {
        *roots.entry(pt.monomial(a, b)).or_insert(0) += 1;
    }
    Ok(PairTerm {
        scale,
        q_power,
        roots,
    })
}

/// `Z_{λ,μ}` as a reduced rational function of `Q`.
pub fn z_pair_symbolic(lambda: &Partition, mu: &Partition, pt: &ParamPoint) -> Result<RationalFunction> {
    let term = pair_term(lambda, mu, pt)?;
    let num = Polynomial::monomial(term.scale, term.q_power);
    Ok(RationalFunction::over_roots(num, &term.roots))
}

/// Graded part `Z_n(Q)` as a reduced rational function of `Q`.
///
/// Every pair term is put over the least common multiple of all pair
/// denominators, whose linear factors are known, and the sum is then
/// reduced by testing those factors only.
pub fn z_level_symbolic(n: usize, pt: &ParamPoint) -> Result<RationalFunction> {
    if n == 0 {
        return Ok(RationalFunction::one());
    }
    let terms = pairs_of_total(n)
        .par_iter()
        .map(|(l, m)| pair_term(l, m, pt))
        .collect::<Result<Vec<_>>>()?;
    let mut lcm: BTreeMap<BigRational, usize> = BTreeMap::new();
    for term in &terms {
        for (root, &m) in &term.roots {
            let e = lcm.entry(root.clone()).or_insert(0);
            *e = (*e).max(m);
        }
    }
    let numerators: Vec<Polynomial> = terms
        .par_iter()
        .map(|term| {
            let mut p = Polynomial::monomial(term.scale.clone(), term.q_power);
            for (root, &m) in &lcm {
                let own = term.roots.get(root).copied().unwrap_or(0);
                for _ in own..m {
                    p = p.mul_linear(root);
                }
            }
            p
        })
        .collect();
    let num = numerators
        .iter()
        .fold(Polynomial::zero(), |acc, p| &acc + p);
    Ok(RationalFunction::over_roots(num, &lcm))
}

/// `Z_0, ..., Z_{n_max}` at one `(q, t)`.
#[derive(Clone, Debug)]
pub struct LevelTable {
    pub point: ParamPoint,
    pub levels: Vec<RationalFunction>,
}

impl LevelTable {
    pub fn build(n_max: usize, pt: &ParamPoint) -> Result<Self> {
        let levels = (0..=n_max)
            .into_par_iter()
            .map(|n| z_level_symbolic(n, pt))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            point: pt.clone(),
            levels,
        })
    }

    pub fn level(&self, n: usize) -> &RationalFunction {
        &self.levels[n]
    }
}

/// `G(r, s; q, t)`.
pub fn g_kernel(r: i64, s: i64, pt: &ParamPoint) -> Result<BigRational> {
    PolePair::new(r, s)?;
    let sign = if r > 0 { -BigRational::one() } else { BigRational::one() };
    let mut value = sign * pt.monomial(r, -s);
    let (ra, sa) = (r.abs(), s.abs());
    for i in -ra..ra {
        for j in -sa..sa {
            if i == 0 && j == 0 {
                continue;
            }
            let f = BigRational::one() - pt.monomial(i, -j);
            if f.is_zero() {
                return Err(Error::NonGeneric(format!("1 − q^{i} t^{} vanishes at {pt}", -j)));
            }
            value /= f;
        }
    }
    Ok(value)
}

/// Right-hand side of the recursion at level `n`, built from the lower
/// levels of any family `F_0, ..., F_{n−1}` of functions of `Q`.
pub fn recursion_rhs(levels: &[RationalFunction], n: usize, pt: &ParamPoint) -> Result<RationalFunction> {
    if levels.len() < n {
        return Err(Error::InvalidArgument(format!(
            "recursion at level {n} needs {n} lower levels, got {}",
            levels.len()
        )));
    }
    let mut roots = BTreeMap::new();
    let mut coefficients = Vec::new();
    for pp in PolePair::up_to(n) {
        let lower = &levels[n - pp.product()];
        let shifted = pp.shifted(pt);
        let value = lower.evaluate(&shifted).map_err(|_| {
            Error::NonGeneric(format!(
                "shifted point q^{} t^{} = {} is a pole of level {} at {pt}",
                pp.r,
                pp.s,
                fmt_rational(&shifted),
                n - pp.product()
            ))
        })?;
        let loc = pp.location(pt);
        if roots.insert(loc.clone(), 1).is_some() {
            return Err(Error::NonGeneric(format!("pole grid collision at {pt}")));
        }
        coefficients.push((loc, g_kernel(pp.r, pp.s, pt)? * value));
    }
    let all = Polynomial::from_roots(roots.keys());
    let mut num = if n == 0 { all.clone() } else { Polynomial::zero() };
    for (loc, c) in &coefficients {
        let (cofactor, _) = all.div_linear(loc);
        num = &num + &cofactor.scale(c);
    }
    Ok(RationalFunction::over_roots(num, &roots))
}

/// `F_n − RHS_n` for a family of levels; zero when the recursion holds.
pub fn recursion_residual_of(levels: &[RationalFunction], n: usize, pt: &ParamPoint) -> Result<RationalFunction> {
    let rhs = recursion_rhs(&levels[..n], n, pt)?;
    Ok(levels[n].sub(&rhs))
}

/// Residual of the recursion for `Z_n`; the zero function when it holds.
pub fn recursion_residual(n: usize, pt: &ParamPoint) -> Result<RationalFunction> {
    let table = LevelTable::build(n, pt)?;
    recursion_residual_of(&table.levels, n, pt)
}

/// Pole structure of a level function against the candidate grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleReport {
    pub level: usize,
    /// Roots of the reduced denominator found on the grid, with multiplicity.
    pub roots: Vec<(BigRational, usize)>,
    /// Denominator part that does not split over the grid.
    pub unfactored: Polynomial,
    pub grid_size: usize,
}

impl PoleReport {
    pub fn squarefree(&self) -> bool {
        self.roots.iter().all(|(_, m)| *m == 1)
    }

    pub fn within_grid(&self) -> bool {
        self.unfactored.is_constant()
    }

    pub fn passed(&self) -> bool {
        self.squarefree() && self.within_grid()
    }
}

pub fn pole_report(f: &RationalFunction, level: usize, pt: &ParamPoint) -> PoleReport {
    let grid = pole_grid(level, pt);
    let split = crate::exact::split_roots(f.denominator(), &grid);
    PoleReport {
        level,
        roots: split.roots,
        unfactored: split.remainder,
        grid_size: grid.len(),
    }
}

/// `(Res_{Q=q^r t^{−s}} Z_n, G(r,s) Z_{n−rs}(q^r t^s))`.
pub fn residue_check(r: i64, s: i64, n: usize, pt: &ParamPoint) -> Result<(BigRational, BigRational)> {
    let table = LevelTable::build(n, pt)?;
    residue_check_with(&table, r, s, n)
}

pub fn residue_check_with(table: &LevelTable, r: i64, s: i64, n: usize) -> Result<(BigRational, BigRational)> {
    let pp = PolePair::new(r, s)?;
    if pp.product() > n {
        return Err(Error::InvalidArgument(format!("r·s = {} exceeds n = {n}", pp.product())));
    }
    let pt = &table.point;
    let lhs = table.level(n).residue_simple(&pp.location(pt))?;
    let rhs = g_kernel(r, s, pt)? * table.level(n - pp.product()).evaluate(&pp.shifted(pt))?;
    Ok((lhs, rhs))
}

/// `Res_{Q=q^r t^{−s}} Z_{∅,(r^s)}` for `r, s ≥ 1`.
pub fn rectangle_residue(r: i64, s: i64, pt: &ParamPoint) -> Result<BigRational> {
    if r < 1 || s < 1 {
        return Err(Error::InvalidArgument("rectangle residue needs r, s ≥ 1".into()));
    }
    let rect = Partition::rectangle(r as usize, s as usize);
    z_pair_symbolic(&Partition::empty(), &rect, pt)?.residue_simple(&pt.monomial(r, -s))
}

/// `(Z_{λ,μ}(Q), Z_{μ,λ}(Q⁻¹))`.
pub fn duality_check(
    lambda: &Partition,
    mu: &Partition,
    q_val: &BigRational,
    pt: &ParamPoint,
) -> Result<(BigRational, BigRational)> {
    if q_val.is_zero() {
        return Err(Error::NonGeneric("Q = 0".into()));
    }
    Ok((z_pair(lambda, mu, q_val, pt)?, z_pair(mu, lambda, &q_val.recip(), pt)?))
}

/// `Z_n(Q)` at a numeric `Q` by direct summation over pairs.
pub fn z_level_value(n: usize, q_val: &BigRational, pt: &ParamPoint) -> Result<BigRational> {
    pairs_of_total(n)
        .iter()
        .map(|(l, m)| z_pair(l, m, q_val, pt))
        .sum()
}

/// Coefficients `x^n Z_n(Q)` for `n = 0..=n_max`, with `x = Λ⁴ t / q`.
pub fn z_series(x: &BigRational, n_max: usize, q_val: &BigRational, pt: &ParamPoint) -> Result<Vec<BigRational>> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut xn = BigRational::one();
    for n in 0..=n_max {
        if xn.is_zero() {
            out.push(BigRational::zero());
        } else {
            out.push(&xn * z_level_value(n, q_val, pt)?);
        }
        xn *= x;
    }
    Ok(out)
}
