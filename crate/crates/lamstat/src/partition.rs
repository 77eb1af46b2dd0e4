//! Integer partitions: statistics, conjugation and graded enumeration.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coeff::Rat;
use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
///
/// Partitions are totally ordered by size first and then lexicographically
/// descending, so `(4) < (3,1) < (2,2) < (2,1,1) < (1,1,1,1)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Validates a weakly decreasing sequence of positive parts.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument(format!("zero part in {parts:?}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!("parts not weakly decreasing: {parts:?}")));
        }
        Ok(Partition { parts })
    }

    /// Sorts the given parts and drops zeros.
    pub fn from_parts(parts: &[usize]) -> Self {
        let mut parts: Vec<usize> = parts.iter().copied().filter(|&p| p > 0).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    /// The empty partition.
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The one-part partition `(n)`, or the empty partition for `n = 0`.
    pub fn row(n: usize) -> Self {
        Self::from_parts(&[n])
    }

    /// The partition `(1, …, 1)` with `n` ones.
    pub fn column(n: usize) -> Self {
        Partition { parts: vec![1; n] }
    }

    /// The parts, largest first.
    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `|τ|`, the sum of the parts.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `‖τ‖`, the number of parts.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    /// Number of parts equal to `i`.
    pub fn multiplicity(&self, i: usize) -> usize {
        self.parts.iter().filter(|&&p| p == i).count()
    }

    /// True for the empty partition.
    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The transpose of the Young diagram.
    pub fn conjugate(&self) -> Self {
        let first = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=first)
            .map(|j| self.parts.iter().filter(|&&p| p >= j).count())
            .collect();
        Partition { parts }
    }

    /// The centralizer order `z_τ = ∏_i τ(i)! i^{τ(i)}`.
    pub fn z(&self) -> Rat {
        let mut acc = BigInt::from(1);
        let mut i = 0;
        while i < self.parts.len() {
            let v = self.parts[i];
            let mut m = 0;
            while i < self.parts.len() && self.parts[i] == v {
                m += 1;
                i += 1;
                acc *= BigInt::from(m) * BigInt::from(v);
            }
        }
        Rat::from_integer(acc)
    }

    /// Multiplies every part by `k`.
    pub fn scale(&self, k: usize) -> Self {
        Partition {
            parts: self.parts.iter().map(|p| p * k).collect(),
        }
    }

    /// Union of the multisets of parts.
    pub fn union(&self, other: &Self) -> Self {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        Self::from_parts(&parts)
    }

    /// Exponent vector `(τ(1), τ(2), …, τ(n))`.
    pub fn multiplicities(&self, n: usize) -> Vec<usize> {
        (1..=n).map(|i| self.multiplicity(i)).collect()
    }

    /// The partition with `a[i-1]` parts equal to `i`.
    pub fn from_multiplicities(a: &[usize]) -> Self {
        let mut parts = Vec::new();
        for (i, &m) in a.iter().enumerate().rev() {
            parts.extend(std::iter::repeat_n(i + 1, m));
        }
        Partition { parts }
    }

    /// Dominance order: `self ⊴ other`.
    pub fn dominated_by(&self, other: &Self) -> bool {
        let mut a = 0;
        let mut b = 0;
        for i in 0..self.parts.len().max(other.parts.len()) {
            a += self.parts.get(i).copied().unwrap_or(0);
            b += other.parts.get(i).copied().unwrap_or(0);
            if a > b {
                return false;
            }
        }
        true
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<usize>::deserialize(d)?;
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}

/// All partitions of exactly `n`, lexicographically descending.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    rec(n, n, &mut cur, &mut out);
    out
}

/// All partitions of size at most `max_size`, in the canonical graded order.
pub fn enumerate(max_size: usize) -> Vec<Partition> {
    (0..=max_size).flat_map(partitions_of).collect()
}

/// All partitions of `n` with at most `k` parts.
pub fn partitions_with_at_most(n: usize, k: usize) -> Vec<Partition> {
    partitions_of(n).into_iter().filter(|p| p.length() <= k).collect()
}
