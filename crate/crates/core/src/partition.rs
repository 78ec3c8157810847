//! Integer partitions (Young diagrams).

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

/// Nonincreasing sequence of positive parts. The empty partition is the root
/// of the Young graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Drops trailing zeros; `None` if the parts increase somewhere.
    pub fn new(mut parts: Vec<usize>) -> Option<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return None;
        }
        Some(Partition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn rows(&self) -> usize {
        self.0.len()
    }

    /// Length of row `i`, zero past the last row.
    pub fn row(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Length of column `j` (number of rows longer than `j`).
    pub fn column(&self, j: usize) -> usize {
        self.0.iter().take_while(|&&r| r > j).count()
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.row(0);
        Partition((0..width).map(|j| self.column(j)).collect())
    }

    /// Rows where a box can be appended while staying a partition.
    pub fn addable_rows(&self) -> impl Iterator<Item = usize> + '_ {
        (0..=self.0.len()).filter(move |&i| i == 0 || self.row(i - 1) > self.row(i))
    }

    pub fn can_add(&self, row: usize) -> bool {
        row <= self.0.len() && (row == 0 || self.row(row - 1) > self.row(row))
    }

    pub fn with_box(&self, row: usize) -> Option<Partition> {
        if !self.can_add(row) {
            return None;
        }
        let mut parts = self.0.clone();
        if row == parts.len() {
            parts.push(1);
        } else {
            parts[row] += 1;
        }
        Some(Partition(parts))
    }

    /// Whether `other` is obtained from `self` by adding one box; returns its row.
    pub fn box_added_to(&self, other: &Partition) -> Option<usize> {
        if other.size() != self.size() + 1 {
            return None;
        }
        let rows = other.rows().max(self.rows());
        let mut added = None;
        for i in 0..rows {
            match other.row(i).checked_sub(self.row(i)) {
                Some(0) => {}
                Some(1) if added.is_none() => added = Some(i),
                _ => return None,
            }
        }
        added
    }

    /// All partitions of `n`, largest first part first (reverse lexicographic).
    pub fn all_of(n: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        fill(n, n, &mut current, &mut out);
        out
    }

    /// Number of standard tableaux of this shape, by the hook length formula.
    pub fn hook_dimension(&self) -> BigUint {
        let n = self.size();
        let mut numer = BigUint::one();
        for k in 2..=n {
            numer *= k;
        }
        let mut denom = BigUint::one();
        for (i, &len) in self.0.iter().enumerate() {
            for j in 0..len {
                let arm = len - j - 1;
                let leg = self.column(j) - i - 1;
                denom *= arm + leg + 1;
            }
        }
        numer / denom
    }
}

fn fill(remaining: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition(current.clone()));
        return;
    }
    for part in (1..=remaining.min(max_part)).rev() {
        current.push(part);
        fill(remaining - part, part, current, out);
        current.pop();
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for Partition {
    type Err = String;

    /// Accepts `(2,1)`, `2,1`, `()` and the empty string.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .trim();
        if inner.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| alloc::format!("bad part in {s:?}"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if parts.contains(&0) {
            return Err(alloc::format!("zero part in {s:?}"));
        }
        Partition::new(parts).ok_or_else(|| alloc::format!("parts of {s:?} increase"))
    }
}
