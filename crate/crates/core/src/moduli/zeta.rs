use num_traits::{One, Zero};

use crate::rational::{binomial, Rational};

/// Memoized Bernoulli numbers with `B_1 = -1/2`.
#[derive(Clone, Debug)]
pub struct BernoulliCache {
    values: Vec<Rational>,
}

impl Default for BernoulliCache {
    fn default() -> Self {
        BernoulliCache { values: vec![Rational::one()] }
    }
}

impl BernoulliCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// `B_k` from `Σ_{j<m+1} C(m+1, j) B_j = 0`.
    pub fn get(&mut self, k: usize) -> Rational {
        while self.values.len() <= k {
            let m = self.values.len();
            let mut s = Rational::zero();
            for (j, b) in self.values.iter().enumerate() {
                s += Rational::from_integer(binomial(m as u32 + 1, j as u32)) * b;
            }
            self.values.push(-s / Rational::from_integer((m as i64 + 1).into()));
        }
        self.values[k].clone()
    }
}

/// `ζ(-k) = -B_{k+1}/(k+1)` for `k ≥ 1`.
pub fn zeta_neg(k: u32) -> Rational {
    zeta_neg_with(&mut BernoulliCache::new(), k)
}

pub fn zeta_neg_with(cache: &mut BernoulliCache, k: u32) -> Rational {
    assert!(k >= 1, "zeta_neg needs k >= 1");
    -cache.get(k as usize + 1) / Rational::from_integer((k as i64 + 1).into())
}
