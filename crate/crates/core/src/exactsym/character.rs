use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::partition::{partitions_of, Partition};
use super::symfunc::SymFunc;
use crate::error::{Error, Result};
use crate::rational::{sign_pow, Rational};

/// Virtual character of `S_n`, stored per cycle type. Missing cycle types are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtualCharacter {
    n: u32,
    values: BTreeMap<Partition, Rational>,
}

impl VirtualCharacter {
    pub fn new(n: u32, values: BTreeMap<Partition, Rational>) -> Result<Self> {
        for k in values.keys() {
            if k.weight() != n {
                return Err(Error::CharacterWeight { key: k.parts().to_vec(), weight: k.weight(), n });
            }
        }
        let values = values.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(VirtualCharacter { n, values })
    }

    pub fn from_fn<F: FnMut(&Partition) -> Rational>(n: u32, mut f: F) -> Self {
        let values = partitions_of(n)
            .into_iter()
            .map(|t| {
                let v = f(&t);
                (t, v)
            })
            .filter(|(_, v)| !v.is_zero())
            .collect();
        VirtualCharacter { n, values }
    }

    pub fn zero(n: u32) -> Self {
        VirtualCharacter { n, values: BTreeMap::new() }
    }

    pub fn trivial(n: u32) -> Self {
        Self::from_fn(n, |_| Rational::one())
    }

    pub fn sign(n: u32) -> Self {
        Self::from_fn(n, |t| sign_pow(t.weight() as i64 - t.len() as i64))
    }

    /// Character of the regular representation.
    pub fn regular(n: u32) -> Self {
        let nf = Rational::from_integer(crate::rational::factorial(n));
        Self::from_fn(n, |t| if t.parts().iter().all(|&p| p == 1) { nf.clone() } else { Rational::zero() })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &BTreeMap<Partition, Rational> {
        &self.values
    }

    pub fn value(&self, cycle_type: &Partition) -> Rational {
        self.values.get(cycle_type).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn dim(&self) -> Rational {
        self.value(&Partition::from_parts(vec![1; self.n as usize]))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_fn(self.n, |t| self.value(t) * c)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Invalid(format!("adding characters of S_{} and S_{}", self.n, other.n)));
        }
        Ok(Self::from_fn(self.n, |t| self.value(t) + other.value(t)))
    }

    /// `ch_n(χ) = Σ_τ χ(τ)/z_τ p_τ`, truncated at `max_weight`.
    pub fn characteristic_at(&self, max_weight: u32) -> SymFunc {
        SymFunc::from_terms(
            max_weight,
            self.values
                .iter()
                .map(|(t, v)| (t.clone(), v / Rational::from_integer(t.z()))),
        )
    }

    /// `ch_n(χ)` at truncation `n`.
    pub fn characteristic(&self) -> SymFunc {
        self.characteristic_at(self.n)
    }

    /// Inverse of [`characteristic`](Self::characteristic): reads off `χ(τ) = ⟨f, p_τ⟩`
    /// from the weight-`n` part of `f`.
    pub fn from_symfunc(f: &SymFunc, n: u32) -> Self {
        Self::from_fn(n, |t| f.coeff(t) * Rational::from_integer(t.z()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactsym::symfunc::{e, h};
    use crate::rational::{euler_phi, int, rat};

    #[test]
    fn trivial_and_sign() {
        assert_eq!(VirtualCharacter::trivial(2).characteristic(), h(2, 2));
        assert_eq!(VirtualCharacter::sign(2).characteristic(), e(2, 2));
        assert_eq!(VirtualCharacter::sign(4).characteristic(), e(4, 4));
    }

    #[test]
    fn induced_from_cyclic_group() {
        // Ind_{Z_n}^{S_n} 1: value n!/|Z_n| * (fraction of Z_n in the class) → Σ_{d|n} φ(d)/n p_d^{n/d}
        let n = 3;
        let chi = VirtualCharacter::from_fn(n, |t| {
            let parts = t.parts();
            let d = parts[0];
            if parts.iter().all(|&p| p == d) {
                // elements of Z_n of order d: φ(d); class size n!/z_t; index (n-1)!
                let count = int(euler_phi(d) as i64);
                let class = Rational::from_integer(crate::rational::factorial(n)) / Rational::from_integer(t.z());
                count * int(2) / class
            } else {
                Rational::zero()
            }
        });
        let f = chi.characteristic();
        assert_eq!(f.coeff(&Partition::from_parts(vec![1, 1, 1])), rat(1, 3));
        assert_eq!(f.coeff(&Partition::from_parts(vec![3])), rat(2, 3));
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn roundtrip_and_rank() {
        let chi = VirtualCharacter::from_fn(4, |t| int(t.len() as i64 * 3 - 7));
        let f = chi.characteristic();
        assert_eq!(VirtualCharacter::from_symfunc(&f, 4), chi);
        let r = f.rank();
        assert_eq!(r.coeff(4), chi.dim() / int(24));
    }

    #[test]
    fn weight_validation() {
        let mut m = BTreeMap::new();
        m.insert(Partition::from_parts(vec![2]), int(1));
        assert!(VirtualCharacter::new(3, m).is_err());
    }
}
