use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::rational::factorial;

/// Integer partition with parts stored in weakly decreasing order.
///
/// Ordered by weight first, then lexicographically by parts, which fixes the
/// iteration order of every map keyed by partitions.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Validating constructor: parts must be positive and weakly decreasing.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::BadPartition(parts));
        }
        Ok(Partition(parts))
    }

    /// Sorts the parts; zeros are dropped.
    pub fn from_parts(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn single(n: u32) -> Self {
        Partition::from_parts(vec![n])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of parts equal to `k`.
    pub fn count(&self, k: u32) -> u32 {
        self.0.iter().filter(|&&p| p == k).count() as u32
    }

    /// Pairs `(part, multiplicity)` in decreasing part order.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// `z_λ = Π i^{m_i} m_i!`, the centralizer order of a permutation of cycle type λ.
    pub fn z(&self) -> BigInt {
        self.multiplicities()
            .into_iter()
            .fold(BigInt::one(), |acc, (i, m)| {
                acc * BigInt::from(i).pow(m) * factorial(m)
            })
    }

    /// Union of multisets of parts (the product `p_λ p_μ`).
    pub fn merge(&self, other: &Partition) -> Partition {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i] >= b[j] {
                out.push(a[i]);
                i += 1;
            } else {
                out.push(b[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Partition(out)
    }

    /// Every part multiplied by `n` (the effect of `p_n ∘ −` on a monomial).
    pub fn scale(&self, n: u32) -> Partition {
        Partition(self.0.iter().map(|&p| p * n).collect())
    }

    /// Removes one copy of `k`, if present.
    pub fn remove_one(&self, k: u32) -> Option<Partition> {
        let pos = self.0.iter().position(|&p| p == k)?;
        let mut v = self.0.clone();
        v.remove(pos);
        Some(Partition(v))
    }

    /// Appends one part `k`.
    pub fn with_part(&self, k: u32) -> Partition {
        self.merge(&Partition(vec![k]))
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// All partitions of `n`, in canonical order.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=max.min(rem)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// All partitions of weight at most `w`, in canonical order.
pub fn partitions_upto(w: u32) -> Vec<Partition> {
    (0..=w).flat_map(partitions_of).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=8).map(|n| partitions_of(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
    }

    #[test]
    fn validation_rejects_unsorted() {
        assert!(Partition::new(vec![1, 3]).is_err());
        assert!(Partition::new(vec![3, 0]).is_err());
        assert!(Partition::new(vec![3, 1, 1]).is_ok());
    }

    #[test]
    fn z_values() {
        assert_eq!(Partition::from_parts(vec![2, 1, 1]).z(), BigInt::from(4));
        assert_eq!(Partition::from_parts(vec![1, 1, 1]).z(), BigInt::from(6));
        assert_eq!(Partition::empty().z(), BigInt::one());
    }

    #[test]
    fn ordering_is_weight_then_lex() {
        let a = Partition::from_parts(vec![1, 1]);
        let b = Partition::from_parts(vec![2]);
        let c = Partition::from_parts(vec![3]);
        assert!(a < b && b < c);
        assert_eq!(
            Partition::from_parts(vec![2, 1]).merge(&Partition::from_parts(vec![3, 1])),
            Partition::from_parts(vec![3, 2, 1, 1])
        );
    }
}
