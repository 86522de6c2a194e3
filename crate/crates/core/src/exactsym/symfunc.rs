use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::partition::{partitions_of, Partition};
use super::series1::{PolySeries1, Var};
use crate::error::{Error, Result};
use crate::rational::{int, sign_pow, Rational};

/// Symmetric function in the power-sum basis, truncated at total weight `max_weight`.
///
/// Binary operators panic on mismatched truncations; the `checked_*` methods
/// report the mismatch instead. Use [`SymFunc::coerce`] to lower a truncation.
#[derive(Clone, PartialEq, Eq)]
pub struct SymFunc {
    max_weight: u32,
    terms: BTreeMap<Partition, Rational>,
}

/// Selector for [`newton_convert`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    H,
    E,
}

/// Selector for [`SymFunc::involution`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Involution {
    /// `p_n ↦ (-1)^{n-1} p_n`
    Omega,
    /// `p_n ↦ -p_n`
    OmegaTilde,
}

pub(crate) fn accumulate(map: &mut HashMap<Partition, Rational>, key: Partition, c: Rational) {
    match map.entry(key) {
        std::collections::hash_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
        }
        std::collections::hash_map::Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

impl SymFunc {
    pub fn zero(max_weight: u32) -> Self {
        SymFunc { max_weight, terms: BTreeMap::new() }
    }

    pub fn constant(c: Rational, max_weight: u32) -> Self {
        Self::monomial(Partition::empty(), c, max_weight)
    }

    pub fn one(max_weight: u32) -> Self {
        Self::constant(Rational::one(), max_weight)
    }

    /// `c·p_λ`, or zero when `|λ| > max_weight`.
    pub fn monomial(lambda: Partition, c: Rational, max_weight: u32) -> Self {
        let mut f = Self::zero(max_weight);
        if lambda.weight() <= max_weight && !c.is_zero() {
            f.terms.insert(lambda, c);
        }
        f
    }

    /// The power sum `p_n`.
    pub fn p(n: u32, max_weight: u32) -> Self {
        Self::monomial(Partition::single(n), Rational::one(), max_weight)
    }

    pub fn p_lambda(parts: &[u32], max_weight: u32) -> Self {
        Self::monomial(Partition::from_parts(parts.to_vec()), Rational::one(), max_weight)
    }

    /// Builds from arbitrary terms, summing duplicates and dropping zero or over-weight terms.
    pub fn from_terms<I: IntoIterator<Item = (Partition, Rational)>>(max_weight: u32, terms: I) -> Self {
        let mut map: HashMap<Partition, Rational> = HashMap::new();
        for (k, c) in terms {
            if k.weight() <= max_weight {
                accumulate(&mut map, k, c);
            }
        }
        Self::from_map(max_weight, map)
    }

    pub(crate) fn from_map(max_weight: u32, map: HashMap<Partition, Rational>) -> Self {
        SymFunc {
            max_weight,
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    pub fn terms(&self) -> &BTreeMap<Partition, Rational> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, lambda: &Partition) -> Rational {
        self.terms.get(lambda).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Partition::empty())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest weight among stored terms.
    pub fn min_weight(&self) -> Option<u32> {
        self.terms.keys().next().map(|k| k.weight())
    }

    /// Lowers the truncation to `w`. Raising it is rejected: the missing terms are unknown.
    pub fn coerce(&self, w: u32) -> Result<Self> {
        if w > self.max_weight {
            return Err(Error::TruncationMismatch(w as i64, self.max_weight as i64));
        }
        Ok(self.truncate(w))
    }

    /// Drops terms above weight `w` and sets the truncation to `min(w, max_weight)`.
    pub fn truncate(&self, w: u32) -> Self {
        let w = w.min(self.max_weight);
        SymFunc {
            max_weight: w,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.weight() <= w)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// Declares a larger truncation. Only sound when the caller knows every
    /// term of weight in `(max_weight, w]` vanishes.
    pub fn assume_exact_to(mut self, w: u32) -> Self {
        self.max_weight = self.max_weight.max(w);
        self
    }

    /// Homogeneous component of weight `d`.
    pub fn homogeneous(&self, d: u32) -> Self {
        SymFunc {
            max_weight: self.max_weight,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.weight() == d)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.max_weight);
        }
        SymFunc {
            max_weight: self.max_weight,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn map_coeffs<F: Fn(&Partition, &Rational) -> Rational>(&self, f: F) -> Self {
        SymFunc {
            max_weight: self.max_weight,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), f(k, v)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.max_weight != other.max_weight {
            Err(Error::TruncationMismatch(self.max_weight as i64, other.max_weight as i64))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let entry = terms.entry(k.clone()).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(k);
            }
        }
        Ok(SymFunc { max_weight: self.max_weight, terms })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_truncated(other, self.max_weight))
    }

    /// Product truncated at `w`, which must not exceed either input's truncation.
    pub(crate) fn mul_truncated(&self, other: &Self, w: u32) -> Self {
        let mut map: HashMap<Partition, Rational> = HashMap::new();
        for (a, ca) in &self.terms {
            let wa = a.weight();
            if wa > w {
                break;
            }
            for (b, cb) in &other.terms {
                if wa + b.weight() > w {
                    break;
                }
                accumulate(&mut map, a.merge(b), ca * cb);
            }
        }
        Self::from_map(w, map)
    }

    fn neg_ref(&self) -> Self {
        SymFunc {
            max_weight: self.max_weight,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.max_weight);
        for _ in 0..k {
            acc = acc.mul_truncated(self, self.max_weight);
        }
        acc
    }

    /// `∂/∂p_n` in the power-sum basis. The truncation drops by `n`.
    pub fn pderiv(&self, n: u32) -> Self {
        let w = self.max_weight.saturating_sub(n);
        let mut map = HashMap::new();
        for (k, c) in &self.terms {
            let m = k.count(n);
            if m > 0 {
                accumulate(&mut map, k.remove_one(n).unwrap(), c * int(m as i64));
            }
        }
        Self::from_map(w, map)
    }

    /// `p_n ∘ f`: every `p_k` replaced by `p_{nk}`, kept at the same truncation.
    pub fn adams(&self, n: u32) -> Self {
        SymFunc {
            max_weight: self.max_weight,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.weight() * n <= self.max_weight)
                .map(|(k, c)| (k.scale(n), c.clone()))
                .collect(),
        }
    }

    /// Plethysm `self ∘ g`. Requires `g` without constant term; the output
    /// truncation is the smaller of the two.
    pub fn plethysm(&self, g: &Self) -> Result<Self> {
        if !g.constant_term().is_zero() {
            return Err(Error::ConstantTerm);
        }
        let w = self.max_weight.min(g.max_weight);
        let g = g.truncate(w);
        let adams: Vec<SymFunc> = (0..=w).map(|n| if n == 0 { Self::zero(w) } else { g.adams(n) }).collect();
        let mut memo: HashMap<Partition, SymFunc> = HashMap::new();
        memo.insert(Partition::empty(), Self::one(w));
        let mut map: HashMap<Partition, Rational> = HashMap::new();
        for (lambda, c) in &self.terms {
            if lambda.weight() > w {
                break;
            }
            let term = pleth_monomial(lambda, &adams, &mut memo, w);
            for (k, v) in &term.terms {
                accumulate(&mut map, k.clone(), c * v);
            }
        }
        Ok(Self::from_map(w, map))
    }

    /// `⟨f, g⟩` with `⟨p_λ, p_μ⟩ = δ_{λμ} z_λ`.
    pub fn inner_product(&self, other: &Self) -> Rational {
        let mut acc = Rational::zero();
        for (k, c) in &self.terms {
            if let Some(d) = other.terms.get(k) {
                acc += c * d * Rational::from_integer(k.z());
            }
        }
        acc
    }

    /// `D(f)g`: substitute `n ∂/∂p_n` for each `p_n` in `f` and apply to `g`.
    ///
    /// `f` is treated as an exact polynomial. The output is certified up to
    /// weight `g.max_weight - (top weight of f)`.
    pub fn adjoint_apply(&self, g: &Self) -> Self {
        let top = self.terms.keys().map(|k| k.weight()).max().unwrap_or(0);
        let w = g.max_weight.saturating_sub(top);
        let mut map = HashMap::new();
        for (lambda, c) in &self.terms {
            for (mu, d) in &g.terms {
                if let Some((rest, factor)) = apply_derivatives(lambda, mu) {
                    if rest.weight() <= w {
                        accumulate(&mut map, rest, c * d * factor);
                    }
                }
            }
        }
        Self::from_map(w, map)
    }

    pub fn involution(&self, which: Involution) -> Self {
        self.map_coeffs(|k, c| {
            let e = match which {
                Involution::Omega => k.weight() as i64 - k.len() as i64,
                Involution::OmegaTilde => k.len() as i64,
            };
            c * sign_pow(e)
        })
    }

    pub fn omega(&self) -> Self {
        self.involution(Involution::Omega)
    }

    pub fn omega_tilde(&self) -> Self {
        self.involution(Involution::OmegaTilde)
    }

    /// Rank homomorphism `p_1 ↦ x`, `p_n ↦ 0` for `n > 1`.
    pub fn rank(&self) -> PolySeries1 {
        let coeffs = self
            .terms
            .iter()
            .filter(|(k, _)| k.parts().iter().all(|&p| p == 1))
            .map(|(k, c)| (k.len() as u32, c.clone()));
        PolySeries1::from_coeffs(Var::X, self.max_weight, coeffs)
    }
}

/// Applies `Π_i λ_i ∂/∂p_{λ_i}` to `p_μ`; returns the surviving monomial and its factor.
fn apply_derivatives(lambda: &Partition, mu: &Partition) -> Option<(Partition, Rational)> {
    let mut rest = mu.clone();
    let mut factor = BigInt::one();
    for (part, m) in lambda.multiplicities() {
        let have = rest.count(part);
        if have < m {
            return None;
        }
        // ∂^m/∂p^m of p^have = have!/(have-m)! p^{have-m}
        for i in 0..m {
            factor *= BigInt::from(part) * BigInt::from(have - i);
            rest = rest.remove_one(part).unwrap();
        }
    }
    Some((rest, Rational::from_integer(factor)))
}

pub(crate) fn pleth_monomial(
    lambda: &Partition,
    adams: &[SymFunc],
    memo: &mut HashMap<Partition, SymFunc>,
    w: u32,
) -> SymFunc {
    if let Some(v) = memo.get(lambda) {
        return v.clone();
    }
    let first = lambda.parts()[0];
    let rest = lambda.remove_one(first).unwrap();
    let tail = pleth_monomial(&rest, adams, memo, w);
    let out = adams[first as usize].mul_truncated(&tail, w);
    memo.insert(lambda.clone(), out.clone());
    out
}

/// `h_n` or `e_n` in the power-sum basis, via `Σ_{λ⊢n} (±1) p_λ / z_λ`.
pub fn newton_convert(basis: Basis, n: u32, max_weight: u32) -> SymFunc {
    if n == 0 {
        return SymFunc::one(max_weight);
    }
    SymFunc::from_terms(
        max_weight,
        partitions_of(n).into_iter().map(|lambda| {
            let sign = match basis {
                Basis::H => Rational::one(),
                Basis::E => sign_pow(n as i64 - lambda.len() as i64),
            };
            let z = Rational::from_integer(lambda.z());
            (lambda, sign / z)
        }),
    )
}

pub fn h(n: u32, max_weight: u32) -> SymFunc {
    newton_convert(Basis::H, n, max_weight)
}

pub fn e(n: u32, max_weight: u32) -> SymFunc {
    newton_convert(Basis::E, n, max_weight)
}

impl fmt::Debug for SymFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymFunc[w≤{}](", self.max_weight)?;
        write!(f, "{})", self)
    }
}

impl fmt::Display for SymFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| format!("{}*p{}", crate::rational::fmt_rational(c), k))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a> $tr<&'a SymFunc> for &'a SymFunc {
            type Output = SymFunc;
            fn $m(self, rhs: &'a SymFunc) -> SymFunc {
                self.$checked(rhs).expect("SymFunc truncation mismatch")
            }
        }
        impl $tr<SymFunc> for SymFunc {
            type Output = SymFunc;
            fn $m(self, rhs: SymFunc) -> SymFunc {
                (&self).$checked(&rhs).expect("SymFunc truncation mismatch")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for SymFunc {
    type Output = SymFunc;
    fn neg(self) -> SymFunc {
        self.neg_ref()
    }
}

impl Neg for &SymFunc {
    type Output = SymFunc;
    fn neg(self) -> SymFunc {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn pl(parts: &[u32], c: Rational, w: u32) -> SymFunc {
        SymFunc::monomial(Partition::from_parts(parts.to_vec()), c, w)
    }

    #[test]
    fn ring_examples() {
        let w = 4;
        assert_eq!(&SymFunc::p(1, w) * &SymFunc::p(1, w), SymFunc::p_lambda(&[1, 1], w));
        let s = &(&SymFunc::p(1, w) + &SymFunc::p(2, w)) - &SymFunc::p(2, w);
        assert_eq!(s, SymFunc::p(1, w));
        assert!(SymFunc::p(1, 3).checked_add(&SymFunc::p(1, 4)).is_err());
    }

    #[test]
    fn newton_examples() {
        let w = 4;
        let h2 = &pl(&[1, 1], rat(1, 2), w) + &pl(&[2], rat(1, 2), w);
        let e2 = &pl(&[1, 1], rat(1, 2), w) - &pl(&[2], rat(1, 2), w);
        assert_eq!(h(2, w), h2);
        assert_eq!(e(2, w), e2);
        assert_eq!(h(1, w), SymFunc::p(1, w));
        assert_eq!(h(0, w), SymFunc::one(w));
    }

    #[test]
    fn newton_recurrence_oracle() {
        // n h_n = Σ_{i=1}^n p_i h_{n-i}, n e_n = Σ (-1)^{i-1} p_i e_{n-i}
        let w = 7;
        for n in 1..=w {
            let mut hs = SymFunc::zero(w);
            let mut es = SymFunc::zero(w);
            for i in 1..=n {
                hs = &hs + &(&SymFunc::p(i, w) * &h(n - i, w));
                es = &es + &(&SymFunc::p(i, w) * &e(n - i, w)).scale(&sign_pow(i as i64 - 1));
            }
            assert_eq!(hs, h(n, w).scale(&int(n as i64)));
            assert_eq!(es, e(n, w).scale(&int(n as i64)));
        }
    }

    #[test]
    fn plethysm_examples() {
        let w = 6;
        assert_eq!(SymFunc::p(2, w).plethysm(&SymFunc::p(3, w)).unwrap(), SymFunc::p(6, w));
        let g = &SymFunc::p(1, w) + &SymFunc::p(2, w);
        let expected = SymFunc::from_terms(
            w,
            vec![
                (Partition::from_parts(vec![1, 1]), rat(1, 2)),
                (Partition::from_parts(vec![2, 1]), rat(1, 1)),
                (Partition::from_parts(vec![2, 2]), rat(1, 2)),
                (Partition::from_parts(vec![2]), rat(1, 2)),
                (Partition::from_parts(vec![4]), rat(1, 2)),
            ],
        );
        assert_eq!(h(2, w).plethysm(&g).unwrap(), expected);
        assert_eq!(
            h(2, w).plethysm(&SymFunc::one(w)).unwrap_err(),
            Error::ConstantTerm
        );
    }

    #[test]
    fn derivative_examples() {
        let w = 4;
        assert_eq!(h(2, w).pderiv(1), SymFunc::p(1, 3));
        assert_eq!(h(2, w).pderiv(2), SymFunc::constant(rat(1, 2), 2));
        assert!(SymFunc::p_lambda(&[2, 1], w).pderiv(3).is_zero());
    }

    #[test]
    fn inner_product_examples() {
        let w = 4;
        assert_eq!(SymFunc::p(2, w).inner_product(&SymFunc::p(2, w)), int(2));
        let p211 = SymFunc::p_lambda(&[2, 1, 1], w);
        assert_eq!(p211.inner_product(&p211), int(4));
        assert_eq!(h(2, w).inner_product(&h(2, w)), int(1));
        assert_eq!(h(3, w).inner_product(&e(3, w)), int(0));
    }

    #[test]
    fn adjoint_examples() {
        let w = 4;
        assert_eq!(SymFunc::p(2, w).adjoint_apply(&SymFunc::p(2, w)), SymFunc::constant(int(2), 2));
        assert_eq!(SymFunc::p(1, w).adjoint_apply(&h(2, w)).terms(), SymFunc::p(1, w).terms());
        let r = h(2, 2).adjoint_apply(&SymFunc::p_lambda(&[1, 1], 2));
        assert_eq!(r.constant_term(), int(1));
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn involution_examples() {
        let w = 5;
        assert_eq!(h(2, w).omega(), e(2, w));
        assert_eq!(h(4, w).omega(), e(4, w));
        assert_eq!(SymFunc::p(3, w).omega_tilde(), -SymFunc::p(3, w));
    }

    #[test]
    fn rank_examples() {
        let w = 5;
        for n in 0..=w {
            let r = h(n, w).rank();
            let expected = Rational::one() / Rational::from_integer(crate::rational::factorial(n));
            assert_eq!(r.coeff(n), expected);
            assert_eq!(r.len(), 1);
        }
        assert!(SymFunc::p(2, w).rank().is_zero());
    }
}
