//! Integer partitions and Young-diagram bookkeeping.
//!
//! Boxes use matrix coordinates: `i` is the row (growing downwards), `j` the
//! column (growing rightwards), both starting at 1. Arm and leg lengths are
//! "relative": the box need not lie inside the diagram, and the values may be
//! negative.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive parts. The empty sequence is the
/// empty partition.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

/// A box `(i, j)` of a Young diagram, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub i: usize,
    pub j: usize,
}

impl Cell {
    pub fn new(i: usize, j: usize) -> Self {
        Self { i, j }
    }
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument(format!(
                "partition parts must be positive: {parts:?}"
            )));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!(
                "partition parts must be weakly decreasing: {parts:?}"
            )));
        }
        Ok(Self(parts))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// The rectangle with `rows` rows of length `width`.
    pub fn rectangle(width: usize, rows: usize) -> Self {
        if width == 0 {
            return Self::empty();
        }
        Self(vec![width; rows])
    }

    /// `(1, 1, ..., 1)` with `n` parts.
    pub fn column(n: usize) -> Self {
        Self(vec![1; n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|λ|`.
    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// `ℓ(λ)`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// `λ_i` for 1-based `i`, zero past the last part.
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    /// `λ'_j`: the number of parts `>= j`.
    pub fn conjugate_part(&self, j: usize) -> usize {
        self.0.iter().take_while(|&&p| p >= j).count()
    }

    pub fn conjugate(&self) -> Self {
        let width = self.part(1);
        Self((1..=width).map(|j| self.conjugate_part(j)).collect())
    }

    /// Relative arm length `λ_i - j`.
    pub fn arm(&self, cell: Cell) -> i64 {
        self.part(cell.i) as i64 - cell.j as i64
    }

    /// Relative leg length `λ'_j - i`.
    pub fn leg(&self, cell: Cell) -> i64 {
        self.conjugate_part(cell.j) as i64 - cell.i as i64
    }

    pub fn contains(&self, cell: Cell) -> bool {
        cell.i >= 1 && cell.j >= 1 && cell.j <= self.part(cell.i)
    }

    /// Boxes in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(r, &len)| (1..=len).map(move |j| Cell::new(r + 1, j)))
    }

    /// Drops the first part; the remaining parts form a partition.
    pub fn tail(&self) -> Self {
        Self(self.0.get(1..).unwrap_or_default().to_vec())
    }

    /// Prepends a part, which must be at least the current first part.
    pub fn with_leading(&self, first: usize) -> Self {
        debug_assert!(first >= self.part(1) && first > 0);
        let mut parts = Vec::with_capacity(self.0.len() + 1);
        parts.push(first);
        parts.extend_from_slice(&self.0);
        Self(parts)
    }

    /// All partitions of `n` in reverse-lexicographic order, e.g.
    /// `[4], [3,1], [2,2], [2,1,1], [1,1,1,1]`.
    pub fn all_of_size(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        fill(n, n, &mut current, &mut out);
        out
    }
}

fn fill(remaining: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition(current.clone()));
        return;
    }
    for part in (1..=max_part.min(remaining)).rev() {
        current.push(part);
        fill(remaining - part, part, current, out);
        current.pop();
    }
}

/// Partitions of `n`, validating the sign of `n`.
pub fn enumerate(n: i64) -> Result<Vec<Partition>> {
    let n = usize::try_from(n)
        .map_err(|_| Error::InvalidArgument(format!("partition size must be non-negative, got {n}")))?;
    Ok(Partition::all_of_size(n))
}

/// All ordered pairs `(λ, μ)` with `|λ| + |μ| = n`, grouped by `|λ|`
/// descending.
pub fn pairs_of_total(n: usize) -> Vec<(Partition, Partition)> {
    let mut out = Vec::new();
    for a in (0..=n).rev() {
        let left = Partition::all_of_size(a);
        let right = Partition::all_of_size(n - a);
        for l in &left {
            for r in &right {
                out.push((l.clone(), r.clone()));
            }
        }
    }
    out
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Self::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "(")?;
        for (k, p) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
