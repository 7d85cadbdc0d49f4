//! Dense exact linear algebra over the rationals.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Matrix = Vec<Vec<BigRational>>;

/// Reduced row-echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x -= &factor * p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    rref(&mut m.clone()).len()
}

pub fn determinant(m: &Matrix) -> BigRational {
    let n = m.len();
    let mut a = m.clone();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if pr != c {
            a.swap(pr, c);
            det = -det;
        }
        let pivot = a[c][c].clone();
        det *= &pivot;
        let inv = pivot.recip();
        let (upper, lower) = a.split_at_mut(c + 1);
        let pivot_row = &upper[c];
        for row in lower {
            if row[c].is_zero() {
                continue;
            }
            let factor = &row[c] * &inv;
            for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x -= &factor * p;
            }
        }
    }
    det
}

pub fn inverse(m: &Matrix) -> Result<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
        return Err(Error::SingularMatrix);
    }
    Ok(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solves `a x = b` for a possibly overdetermined system, requiring a
/// unique solution.
pub fn solve_unique(a: &Matrix, b: &[BigRational]) -> Result<Vec<BigRational>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return Err(Error::Internal("inconsistent linear system".into()));
    }
    if pivots.len() < cols {
        return Err(Error::SingularMatrix);
    }
    Ok((0..cols).map(|i| aug[i][cols].clone()).collect())
}

/// A nonzero kernel vector with the first free variable set to one.
pub fn null_vector(a: &Matrix) -> Option<Vec<BigRational>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut m = a.clone();
    let pivots = rref(&mut m);
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut v = vec![BigRational::zero(); cols];
    v[free] = BigRational::one();
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = -m[r][free].clone();
    }
    Some(v)
}

pub fn mat_vec(a: &Matrix, x: &[BigRational]) -> Vec<BigRational> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(u, v)| u * v).sum())
        .collect()
}

pub fn is_symmetric(a: &Matrix) -> bool {
    a.iter()
        .enumerate()
        .all(|(i, row)| row.iter().enumerate().all(|(j, v)| *v == a[j][i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&v| rat(v, 1)).collect())
            .collect()
    }

    /// Leibniz expansion, used as an oracle for small determinants.
    fn leibniz(a: &Matrix) -> BigRational {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = a.len();
        perms(n)
            .into_iter()
            .map(|p| {
                let inversions = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| p[i] > p[j])
                    .count();
                let prod: BigRational = (0..n).map(|i| a[i][p[i]].clone()).product();
                if inversions % 2 == 0 {
                    prod
                } else {
                    -prod
                }
            })
            .sum()
    }

    #[test]
    fn determinant_matches_leibniz() {
        let a = m(&[&[2, -1, 0, 3], &[1, 4, 2, 0], &[0, 5, -2, 1], &[7, 1, 1, 1]]);
        assert_eq!(determinant(&a), leibniz(&a));
        let singular = m(&[&[1, 2], &[2, 4]]);
        assert!(determinant(&singular).is_zero());
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = inverse(&a).unwrap();
        for (i, row) in a.iter().enumerate() {
            for j in 0..3 {
                let v: BigRational = row.iter().zip(&inv).map(|(x, r)| x * &r[j]).sum();
                assert_eq!(v, if i == j { rat(1, 1) } else { rat(0, 1) });
            }
        }
        assert_eq!(inverse(&m(&[&[1, 2], &[2, 4]])), Err(Error::SingularMatrix));
    }

    #[test]
    fn overdetermined_solve() {
        let a = m(&[&[1, 1], &[1, -1], &[2, 0]]);
        let x = solve_unique(&a, &[rat(3, 1), rat(1, 1), rat(4, 1)]).unwrap();
        assert_eq!(x, vec![rat(2, 1), rat(1, 1)]);
        assert!(solve_unique(&a, &[rat(3, 1), rat(1, 1), rat(5, 1)]).is_err());
        let under = m(&[&[1, 1]]);
        assert_eq!(solve_unique(&under, &[rat(1, 1)]), Err(Error::SingularMatrix));
    }

    #[test]
    fn kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let v = null_vector(&a).unwrap();
        assert!(mat_vec(&a, &v).iter().all(Zero::is_zero));
        assert!(v.iter().any(|x| !x.is_zero()));
        assert!(null_vector(&m(&[&[1, 0], &[0, 1]])).is_none());
    }
}
