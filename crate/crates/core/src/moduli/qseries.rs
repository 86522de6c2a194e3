use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_rational, int, Rational};

/// Weight bound meaning "exact": no term has been dropped.
pub const EXACT: i64 = i64::MAX / 4;

/// Optional auxiliary variable of a [`QSeries`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Aux {
    None,
    X,
    Xi,
    /// `q_n`, of weight `n`.
    Q(u32),
}

impl Aux {
    pub fn weight(self) -> i64 {
        match self {
            Aux::None => 0,
            Aux::X | Aux::Xi => 1,
            Aux::Q(n) => n as i64,
        }
    }

    pub fn name(self) -> String {
        match self {
            Aux::None => String::new(),
            Aux::X => "x".into(),
            Aux::Xi => "xi".into(),
            Aux::Q(n) => format!("q{}", n),
        }
    }
}

/// Laurent series in `ħ^{1/2}` (exponents stored doubled), polynomial in an
/// optional auxiliary variable.
///
/// Terms are graded by `weight = hexp_x2 + deg·w(aux)`, so `ħ` has weight 2.
/// Every term of weight at most `max_weight` is exact.
#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    aux: Aux,
    max_weight: i64,
    terms: BTreeMap<(i32, u32), Rational>,
}

impl QSeries {
    pub fn zero(aux: Aux, max_weight: i64) -> Self {
        QSeries { aux, max_weight, terms: BTreeMap::new() }
    }

    /// Series in `ħ` alone, exact through `ħ^order`.
    pub fn hbar_series(order: i64) -> Self {
        Self::zero(Aux::None, 2 * order)
    }

    pub fn one(aux: Aux, max_weight: i64) -> Self {
        Self::monomial(aux, 0, 0, Rational::one(), max_weight)
    }

    pub fn monomial(aux: Aux, hexp_x2: i32, deg: u32, c: Rational, max_weight: i64) -> Self {
        Self::from_terms(aux, max_weight, [((hexp_x2, deg), c)])
    }

    pub fn from_terms<I: IntoIterator<Item = ((i32, u32), Rational)>>(aux: Aux, max_weight: i64, terms: I) -> Self {
        let mut map: HashMap<(i32, u32), Rational> = HashMap::new();
        for (k, c) in terms {
            if weight_of(aux, k) <= max_weight {
                *map.entry(k).or_insert_with(Rational::zero) += c;
            }
        }
        QSeries {
            aux,
            max_weight,
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn aux(&self) -> Aux {
        self.aux
    }

    pub fn max_weight(&self) -> i64 {
        self.max_weight
    }

    pub fn terms(&self) -> &BTreeMap<(i32, u32), Rational> {
        &self.terms
    }

    pub fn coeff(&self, hexp_x2: i32, deg: u32) -> Rational {
        self.terms.get(&(hexp_x2, deg)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of `ħ^k` in a series without auxiliary variable.
    pub fn hbar_coeff(&self, k: i32) -> Rational {
        self.coeff(2 * k, 0)
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

    pub fn weight(&self, key: (i32, u32)) -> i64 {
        weight_of(self.aux, key)
    }

    pub fn min_weight(&self) -> Option<i64> {
        self.terms.keys().map(|&k| self.weight(k)).min()
    }

    /// Smallest doubled `ħ`-exponent present.
    pub fn min_hexp_x2(&self) -> Option<i32> {
        self.terms.keys().map(|k| k.0).min()
    }

    pub fn truncate(&self, w: i64) -> Self {
        let w = w.min(self.max_weight);
        Self::from_terms(self.aux, w, self.terms.iter().map(|(k, c)| (*k, c.clone())))
    }

    /// Declares the series exact to a larger weight; sound only for polynomials
    /// known to have no further terms.
    pub fn assume_exact_to(mut self, w: i64) -> Self {
        self.max_weight = self.max_weight.max(w);
        self
    }

    fn merge_aux(&self, other: &Self) -> Aux {
        match (self.aux, other.aux) {
            (Aux::None, a) | (a, Aux::None) => a,
            (a, b) if a == b => a,
            (a, b) => panic!("QSeries auxiliary variable mismatch: {:?} vs {:?}", a, b),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let aux = self.merge_aux(other);
        Self::from_terms(
            aux,
            self.max_weight.min(other.max_weight),
            self.terms.iter().chain(other.terms.iter()).map(|(k, c)| (*k, c.clone())),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&int(-1))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.aux, self.max_weight, self.terms.iter().map(|(k, v)| (*k, v * c)))
    }

    /// Product. Negative-weight terms lower the certified weight of the result.
    pub fn mul(&self, other: &Self) -> Self {
        let aux = self.merge_aux(other);
        let ma = self.min_weight().unwrap_or(self.max_weight.saturating_add(1));
        let mb = other.min_weight().unwrap_or(other.max_weight.saturating_add(1));
        let w = (self.max_weight.saturating_add(mb.min(0))).min(other.max_weight.saturating_add(ma.min(0)));
        let mut map: HashMap<(i32, u32), Rational> = HashMap::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let k = (ka.0 + kb.0, ka.1 + kb.1);
                if weight_of(aux, k) <= w {
                    *map.entry(k).or_insert_with(Rational::zero) += ca * cb;
                }
            }
        }
        QSeries { aux, max_weight: w, terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    /// `ħ^{h2/2}·self`; the certified weight moves with the shift.
    pub fn shift_hbar(&self, hexp_x2: i32) -> Self {
        QSeries {
            aux: self.aux,
            max_weight: self.max_weight.saturating_add(hexp_x2 as i64),
            terms: self.terms.iter().map(|(&(h, d), c)| ((h + hexp_x2, d), c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.aux, self.max_weight);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    fn check_positive(&self) -> Result<()> {
        for &k in self.terms.keys() {
            let w = self.weight(k);
            if w < 1 {
                return Err(Error::NotPositive { weight: w, hexp_x2: k.0 });
            }
        }
        Ok(())
    }

    /// `exp(u)` for `u` with all terms of positive weight.
    pub fn exp(&self) -> Result<Self> {
        self.check_positive()?;
        let mut acc = Self::one(self.aux, self.max_weight);
        let mut term = acc.clone();
        let mut k = 1i64;
        loop {
            term = term.mul(self).scale(&(Rational::one() / int(k)));
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term);
            k += 1;
        }
        Ok(acc)
    }

    /// `log(F)` for `F = 1 + u` with `u` of positive weight.
    pub fn log(&self) -> Result<Self> {
        if self.coeff(0, 0) != Rational::one() {
            return Err(Error::NotUnit);
        }
        let u = self.sub(&Self::one(self.aux, self.max_weight));
        u.log1p()
    }

    /// `log(1 + u)` for `u` of positive weight.
    pub fn log1p(&self) -> Result<Self> {
        self.check_positive()?;
        let mut acc = Self::zero(self.aux, self.max_weight);
        let mut power = Self::one(self.aux, self.max_weight);
        let mut k = 1i64;
        loop {
            power = power.mul(self);
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { int(1) } else { int(-1) };
            acc = acc.add(&power.scale(&(sign / int(k))));
            k += 1;
        }
        Ok(acc)
    }

    /// Substitutes `ħ ↦ ħ^l`.
    pub fn hbar_power(&self, l: u32) -> Self {
        let aux = self.aux;
        Self::from_terms(
            aux,
            scale_bound(self.max_weight, l as i64),
            self.terms.iter().map(|(k, c)| ((k.0 * l as i32, k.1), c.clone())),
        )
    }

    /// Terms with auxiliary degree 0, as a pure `ħ`-series.
    pub fn constant_in_aux(&self) -> Self {
        Self::from_terms(
            Aux::None,
            self.max_weight,
            self.terms.iter().filter(|(k, _)| k.1 == 0).map(|(k, c)| (*k, c.clone())),
        )
    }

    /// Relabels the auxiliary variable; the caller keeps the grading consistent.
    pub fn with_aux(&self, aux: Aux) -> Self {
        QSeries { aux, max_weight: self.max_weight, terms: self.terms.clone() }
    }
}

/// Weight bound after `ħ ↦ ħ^l`: unknown terms of weight `> w` map to weight `> l·w`
/// only when `w ≥ 0`.
fn scale_bound(w: i64, l: i64) -> i64 {
    if w >= EXACT {
        EXACT
    } else if w >= 0 {
        w.saturating_mul(l).min(EXACT)
    } else {
        l * (w + 1) - 1
    }
}

fn weight_of(aux: Aux, k: (i32, u32)) -> i64 {
    k.0 as i64 + aux.weight() * k.1 as i64
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(h, d), c)| {
                let mut s = fmt_rational(c);
                if h != 0 {
                    if h % 2 == 0 {
                        s += &format!("*h^{}", h / 2);
                    } else {
                        s += &format!("*h^({}/2)", h);
                    }
                }
                if d != 0 {
                    s += &format!("*{}^{}", self.aux.name(), d);
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn half_powers_multiply() {
        let h = QSeries::monomial(Aux::None, 1, 0, int(1), 10);
        assert_eq!(h.mul(&h), QSeries::monomial(Aux::None, 2, 0, int(1), 10));
    }

    #[test]
    fn exp_log_roundtrip() {
        let u = QSeries::from_terms(Aux::Xi, 8, [((0, 1), int(1)), ((2, 1), rat(1, 3)), ((-2, 3), rat(-1, 2))]);
        let e = u.exp().unwrap();
        assert_eq!(e.log().unwrap(), u);
    }

    #[test]
    fn negative_weight_products_lower_bound() {
        let a = QSeries::monomial(Aux::None, -2, 0, int(1), EXACT);
        let b = QSeries::from_terms(Aux::None, 6, [((2, 0), int(1))]);
        let p = a.mul(&b);
        assert_eq!(p.max_weight(), 4);
        assert_eq!(p.coeff(0, 0), int(1));
    }
}
