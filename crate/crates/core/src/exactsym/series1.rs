use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{fmt_rational, int, Rational};

/// Variable tag of a [`PolySeries1`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Xi,
}

/// Truncated power series in one variable. Binary operations truncate at the
/// smaller of the two degrees.
#[derive(Clone, PartialEq, Eq)]
pub struct PolySeries1 {
    var: Var,
    max_degree: u32,
    coeffs: BTreeMap<u32, Rational>,
}

impl PolySeries1 {
    pub fn zero(var: Var, max_degree: u32) -> Self {
        PolySeries1 { var, max_degree, coeffs: BTreeMap::new() }
    }

    pub fn from_coeffs<I: IntoIterator<Item = (u32, Rational)>>(var: Var, max_degree: u32, coeffs: I) -> Self {
        let mut out = Self::zero(var, max_degree);
        for (k, c) in coeffs {
            if k <= max_degree {
                *out.coeffs.entry(k).or_insert_with(Rational::zero) += c;
            }
        }
        out.coeffs.retain(|_, c| !c.is_zero());
        out
    }

    pub fn monomial(var: Var, k: u32, c: Rational, max_degree: u32) -> Self {
        Self::from_coeffs(var, max_degree, [(k, c)])
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, k: u32) -> Rational {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn truncate(&self, d: u32) -> Self {
        let d = d.min(self.max_degree);
        Self::from_coeffs(self.var, d, self.coeffs.iter().map(|(k, c)| (*k, c.clone())))
    }

    pub fn add(&self, other: &Self) -> Self {
        let d = self.max_degree.min(other.max_degree);
        Self::from_coeffs(
            self.var,
            d,
            self.coeffs.iter().chain(other.coeffs.iter()).map(|(k, c)| (*k, c.clone())),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.var, self.max_degree, self.coeffs.iter().map(|(k, v)| (*k, v * c)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.max_degree.min(other.max_degree);
        let mut out = Self::zero(self.var, d);
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                if a + b > d {
                    break;
                }
                *out.coeffs.entry(a + b).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        out.coeffs.retain(|_, c| !c.is_zero());
        out
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.var,
            self.max_degree.saturating_sub(1),
            self.coeffs
                .iter()
                .filter(|(k, _)| **k > 0)
                .map(|(k, c)| (k - 1, c * int(*k as i64))),
        )
    }

    /// `self(g)`; requires `g(0) = 0`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if !g.coeff(0).is_zero() {
            return Err(Error::ConstantTerm);
        }
        let d = self.max_degree.min(g.max_degree);
        let mut acc = Self::zero(g.var, d);
        // Horner evaluation.
        let top = self.coeffs.keys().next_back().copied().unwrap_or(0).min(d);
        for k in (0..=top).rev() {
            acc = acc.mul(g).truncate(d);
            acc = acc.add(&Self::monomial(g.var, 0, self.coeff(k), d));
        }
        Ok(acc)
    }

    /// Compositional inverse of `c·x + …` with `c ≠ 0`.
    pub fn inverse(&self) -> Result<Self> {
        if !self.coeff(0).is_zero() {
            return Err(Error::ConstantTerm);
        }
        let c = self.coeff(1);
        if c.is_zero() {
            return Err(Error::NoLeadingUnit("linear coefficient is zero".into()));
        }
        let d = self.max_degree;
        let mut v = Self::monomial(self.var, 1, Rational::from_integer(1.into()) / &c, d);
        for k in 2..=d {
            let r = self.compose(&v.truncate(d))?.coeff(k);
            let fix = -r / &c;
            v = v.add(&Self::monomial(self.var, k, fix, d));
        }
        Ok(v)
    }

    /// Classical Legendre transform: the `g` with `g(f') + f = x f'`.
    pub fn legendre(&self) -> Result<Self> {
        let d = self.max_degree;
        if !self.coeff(0).is_zero() || !self.coeff(1).is_zero() || self.coeff(2).is_zero() {
            return Err(Error::NotStar("need f = a_2 x^2/2 + ... with a_2 != 0".into()));
        }
        let fp = self.derivative();
        let inv = fp.inverse()?;
        let x = Self::monomial(self.var, 1, int(1), d);
        // f' and its inverse are known to degree d-1. Multiplying by x, and composing
        // x f' - f (which starts at degree 2) with the inverse, are both exact to degree d.
        let (mut fp, mut inv) = (fp, inv);
        fp.max_degree = d;
        inv.max_degree = d;
        x.mul(&fp).sub(self).compose(&inv)
    }
}

impl fmt::Debug for PolySeries1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for PolySeries1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = match self.var {
            Var::X => "x",
            Var::Xi => "xi",
        };
        if self.coeffs.is_empty() {
            return write!(f, "0 + O({}^{})", v, self.max_degree + 1);
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(k, c)| format!("{}*{}^{}", fmt_rational(c), v, k))
            .collect();
        write!(f, "{} + O({}^{})", parts.join(" + "), v, self.max_degree + 1)
    }
}
