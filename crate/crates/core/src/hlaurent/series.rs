use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactsym::{Partition, SymFunc};
use crate::moduli::EXACT;
use crate::rational::{fmt_rational, int, Rational};

/// Monomial `ħ^{h2/2} p_λ q_μ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HMono {
    pub h2: i32,
    pub p: Partition,
    pub q: Partition,
}

impl HMono {
    pub fn new(h2: i32, p: Partition, q: Partition) -> Self {
        HMono { h2, p, q }
    }

    /// `h2 + |p| + |q|`: `ħ^{1/2}` has weight 1, `p_n` and `q_n` weight `n`.
    pub fn weight(&self) -> i64 {
        self.h2 as i64 + self.p.weight() as i64 + self.q.weight() as i64
    }

    pub fn mul(&self, other: &HMono) -> HMono {
        HMono { h2: self.h2 + other.h2, p: self.p.merge(&other.p), q: self.q.merge(&other.q) }
    }
}

/// Truncation contract of an [`HLaurent`].
///
/// Every monomial of weight at most `max_weight` (and, when `q_max` is set,
/// with `|q| ≤ q_max`) is exact. `hexp_min_x2` is a lower bound for the
/// doubled `ħ`-exponent of every stored term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationSpec {
    pub max_weight: i64,
    pub hexp_min_x2: i32,
    pub q_max: Option<u32>,
}

impl TruncationSpec {
    pub fn weight(max_weight: i64) -> Self {
        TruncationSpec { max_weight, hexp_min_x2: 0, q_max: None }
    }

    pub fn with_q_max(mut self, q: u32) -> Self {
        self.q_max = Some(q);
        self
    }

    pub fn with_hexp_min_x2(mut self, h: i32) -> Self {
        self.hexp_min_x2 = h;
        self
    }

    fn admits(&self, m: &HMono) -> bool {
        m.weight() <= self.max_weight && self.q_max.is_none_or(|qm| m.q.weight() <= qm)
    }
}

pub(crate) fn min_q(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Laurent series in `ħ^{1/2}` with symmetric-function coefficients in `p`
/// (and optionally a second set of power sums `q`).
///
/// Arithmetic between series of different truncations yields the coarser
/// truncation; products account for negative-weight factors.
#[derive(Clone, PartialEq, Eq)]
pub struct HLaurent {
    trunc: TruncationSpec,
    terms: BTreeMap<HMono, Rational>,
}

pub(crate) fn acc(map: &mut HashMap<HMono, Rational>, k: HMono, c: Rational) {
    match map.entry(k) {
        std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += c,
        std::collections::hash_map::Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

impl HLaurent {
    pub fn zero(trunc: TruncationSpec) -> Self {
        HLaurent { trunc, terms: BTreeMap::new() }
    }

    pub fn zero_w(max_weight: i64) -> Self {
        Self::zero(TruncationSpec::weight(max_weight))
    }

    pub fn one(max_weight: i64) -> Self {
        Self::monomial(HMono::new(0, Partition::empty(), Partition::empty()), Rational::one(), TruncationSpec::weight(max_weight))
    }

    pub fn monomial(m: HMono, c: Rational, trunc: TruncationSpec) -> Self {
        Self::from_terms(trunc, [(m, c)])
    }

    /// `c ħ^{h2/2} p_λ`.
    pub fn hp(h2: i32, p: &[u32], c: Rational, max_weight: i64) -> Self {
        Self::monomial(
            HMono::new(h2, Partition::from_parts(p.to_vec()), Partition::empty()),
            c,
            TruncationSpec::weight(max_weight),
        )
    }

    /// Builds from terms, dropping zero or out-of-contract terms; `hexp_min_x2`
    /// is tightened to the stored terms.
    pub fn from_terms<I: IntoIterator<Item = (HMono, Rational)>>(trunc: TruncationSpec, terms: I) -> Self {
        let mut map = HashMap::new();
        for (k, c) in terms {
            if trunc.admits(&k) {
                acc(&mut map, k, c);
            }
        }
        Self::from_map(trunc, map)
    }

    pub(crate) fn from_map(trunc: TruncationSpec, map: HashMap<HMono, Rational>) -> Self {
        let terms: BTreeMap<HMono, Rational> = map
            .into_iter()
            .filter(|(k, c)| !c.is_zero() && trunc.admits(k))
            .collect();
        let mut out = HLaurent { trunc, terms };
        out.tighten();
        out
    }

    fn tighten(&mut self) {
        if let Some(h) = self.terms.keys().map(|k| k.h2).min() {
            self.trunc.hexp_min_x2 = h;
        }
    }

    /// `ħ^{h2/2}·f`, certified to weight `f.max_weight + h2`.
    pub fn from_symfunc(f: &SymFunc, h2: i32) -> Self {
        let w = f.max_weight() as i64 + h2 as i64;
        Self::from_terms(
            TruncationSpec::weight(w).with_hexp_min_x2(h2),
            f.iter().map(|(k, c)| (HMono::new(h2, k.clone(), Partition::empty()), c.clone())),
        )
    }

    /// Same as [`from_symfunc`](Self::from_symfunc) but with the symmetric function in `q`.
    pub fn from_symfunc_q(f: &SymFunc, h2: i32) -> Self {
        let w = f.max_weight() as i64 + h2 as i64;
        Self::from_terms(
            TruncationSpec::weight(w).with_hexp_min_x2(h2),
            f.iter().map(|(k, c)| (HMono::new(h2, Partition::empty(), k.clone()), c.clone())),
        )
    }

    pub fn trunc(&self) -> TruncationSpec {
        self.trunc
    }

    pub fn max_weight(&self) -> i64 {
        self.trunc.max_weight
    }

    pub fn q_max(&self) -> Option<u32> {
        self.trunc.q_max
    }

    pub fn terms(&self) -> &BTreeMap<HMono, Rational> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&HMono, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &HMono) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
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

    pub fn constant_term(&self) -> Rational {
        self.coeff(&HMono::new(0, Partition::empty(), Partition::empty()))
    }

    pub fn min_weight(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.weight()).min()
    }

    pub fn hexp_min_x2(&self) -> i32 {
        self.trunc.hexp_min_x2
    }

    /// Lowers the weight bound.
    pub fn truncate(&self, w: i64) -> Self {
        let mut t = self.trunc;
        t.max_weight = t.max_weight.min(w);
        Self::from_terms(t, self.terms.iter().map(|(k, c)| (k.clone(), c.clone())))
    }

    /// Imposes (or lowers) a cap on `|q|`.
    pub fn cap_q(&self, q: u32) -> Self {
        let mut t = self.trunc;
        t.q_max = min_q(t.q_max, Some(q));
        Self::from_terms(t, self.terms.iter().map(|(k, c)| (k.clone(), c.clone())))
    }

    /// Declares a larger weight bound. Sound only for exact polynomials.
    pub fn assume_exact_to(mut self, w: i64) -> Self {
        self.trunc.max_weight = self.trunc.max_weight.max(w);
        self
    }

    /// Keeps only the terms for which `pred` holds; the truncation is unchanged.
    pub fn filter<F: Fn(&HMono) -> bool>(&self, pred: F) -> Self {
        let mut out = HLaurent {
            trunc: self.trunc,
            terms: self.terms.iter().filter(|(k, _)| pred(k)).map(|(k, c)| (k.clone(), c.clone())).collect(),
        };
        out.tighten();
        out
    }

    pub fn map_coeffs<F: Fn(&HMono, &Rational) -> Rational>(&self, f: F) -> Self {
        Self::from_terms(self.trunc, self.terms.iter().map(|(k, c)| (k.clone(), f(k, c))))
    }

    /// Coefficient of `ħ^{h2/2}` as a symmetric function in `p` (terms without `q`).
    pub fn hbar_coeff(&self, h2: i32) -> SymFunc {
        let w = (self.trunc.max_weight - h2 as i64).max(0) as u32;
        SymFunc::from_terms(
            w,
            self.terms
                .iter()
                .filter(|(k, _)| k.h2 == h2 && k.q.is_empty())
                .map(|(k, c)| (k.p.clone(), c.clone())),
        )
    }

    /// Renames `q_n ↦ p_n`; requires no `p` variables.
    pub fn rename_q_to_p(&self) -> Result<Self> {
        if self.terms.keys().any(|k| !k.p.is_empty()) {
            return Err(Error::Invalid("rename q to p: series already depends on p".into()));
        }
        let t = TruncationSpec { q_max: None, ..self.trunc };
        let mut out = Self::from_terms(
            t,
            self.terms.iter().map(|(k, c)| (HMono::new(k.h2, k.q.clone(), Partition::empty()), c.clone())),
        );
        out.trunc.hexp_min_x2 = self.trunc.hexp_min_x2;
        out.tighten();
        Ok(out)
    }

    /// Applies `f` to every `p`-partition of a `q`-free series (e.g. ω̃).
    pub fn map_p<F: Fn(&Partition, &Rational) -> Rational>(&self, f: F) -> Self {
        self.map_coeffs(|k, c| f(&k.p, c))
    }

    /// `ω̃`: `p_n ↦ -p_n`; `q` and `ħ` untouched.
    pub fn omega_tilde(&self) -> Self {
        self.map_p(|p, c| if p.len() % 2 == 0 { c.clone() } else { -c })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map_coeffs(|_, v| v * c)
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        let t = TruncationSpec {
            max_weight: self.trunc.max_weight.min(other.trunc.max_weight),
            hexp_min_x2: self.trunc.hexp_min_x2.min(other.trunc.hexp_min_x2),
            q_max: min_q(self.trunc.q_max, other.trunc.q_max),
        };
        let mut map = HashMap::with_capacity(self.terms.len() + other.terms.len());
        for (k, c) in self.terms.iter().chain(other.terms.iter()) {
            acc(&mut map, k.clone(), c.clone());
        }
        Self::from_map(t, map)
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        HLaurent { trunc: self.trunc, terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect() }
    }

    /// Truncation of a product: unknown terms of one factor, multiplied by the
    /// lowest-weight term of the other, must stay above the bound.
    pub(crate) fn product_trunc(&self, other: &Self) -> TruncationSpec {
        let wa = self.trunc.max_weight;
        let wb = other.trunc.max_weight;
        let ma = self.min_weight().unwrap_or(wa.saturating_add(1));
        let mb = other.min_weight().unwrap_or(wb.saturating_add(1));
        let w = wa.saturating_add(mb.min(0)).min(wb.saturating_add(ma.min(0))).min(EXACT);
        TruncationSpec {
            max_weight: w,
            hexp_min_x2: self.trunc.hexp_min_x2 + other.trunc.hexp_min_x2,
            q_max: min_q(self.trunc.q_max, other.trunc.q_max),
        }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        let t = self.product_trunc(other);
        // Sort the right factor by weight so the inner loop can stop early.
        let mut rhs: Vec<(i64, &HMono, &Rational)> = other.terms.iter().map(|(k, c)| (k.weight(), k, c)).collect();
        rhs.sort_by_key(|x| x.0);
        let mut map = HashMap::new();
        for (a, ca) in &self.terms {
            let wa = a.weight();
            let qa = a.q.weight();
            for &(wb, b, cb) in &rhs {
                if wa + wb > t.max_weight {
                    break;
                }
                if let Some(qm) = t.q_max {
                    if qa + b.q.weight() > qm {
                        continue;
                    }
                }
                acc(&mut map, a.mul(b), ca * cb);
            }
        }
        Self::from_map(t, map)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.trunc.max_weight);
        for _ in 0..k {
            out = out.mul_ref(self);
        }
        out
    }

    /// Checks the condition under which `Exp` and `Log` converge: every term
    /// has positive weight, or weight zero with nonempty `q` under a `q` cap.
    pub fn check_f1(&self, allow_q: bool) -> Result<()> {
        for k in self.terms.keys() {
            let w = k.weight();
            let ok = w >= 1 || (allow_q && w == 0 && !k.q.is_empty() && self.trunc.q_max.is_some());
            if !ok {
                return Err(Error::NotPositive { weight: w, hexp_x2: k.h2 });
            }
        }
        Ok(())
    }

    /// Equality on the common truncation.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let w = self.trunc.max_weight.min(other.trunc.max_weight);
        let q = min_q(self.trunc.q_max, other.trunc.q_max);
        let a = self.truncate(w);
        let b = other.truncate(w);
        let (a, b) = match q {
            Some(q) => (a.cap_q(q), b.cap_q(q)),
            None => (a, b),
        };
        a.terms == b.terms
    }

    /// First term where two series differ on their common truncation.
    pub fn first_difference(&self, other: &Self) -> Option<(HMono, Rational, Rational)> {
        let w = self.trunc.max_weight.min(other.trunc.max_weight);
        let a = self.truncate(w);
        let b = other.truncate(w);
        let keys: std::collections::BTreeSet<HMono> = a.terms.keys().chain(b.terms.keys()).cloned().collect();
        keys.into_iter().find(|k| a.coeff(k) != b.coeff(k)).map(|k| {
            let (x, y) = (a.coeff(&k), b.coeff(&k));
            (k, x, y)
        })
    }
}

impl fmt::Debug for HLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HLaurent[w≤{}, h≥{}/2", self.trunc.max_weight, self.trunc.hexp_min_x2)?;
        if let Some(q) = self.trunc.q_max {
            write!(f, ", |q|≤{}", q)?;
        }
        write!(f, "]({})", self)
    }
}

impl fmt::Display for HLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let mut s = fmt_rational(c);
                if k.h2 != 0 {
                    if k.h2 % 2 == 0 {
                        s += &format!("*h^{}", k.h2 / 2);
                    } else {
                        s += &format!("*h^({}/2)", k.h2);
                    }
                }
                if !k.p.is_empty() {
                    s += &format!("*p{}", k.p);
                }
                if !k.q.is_empty() {
                    s += &format!("*q{}", k.q);
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

macro_rules! hbinop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl<'a> $tr<&'a HLaurent> for &'a HLaurent {
            type Output = HLaurent;
            fn $m(self, rhs: &'a HLaurent) -> HLaurent {
                self.$imp(rhs)
            }
        }
        impl $tr<HLaurent> for HLaurent {
            type Output = HLaurent;
            fn $m(self, rhs: HLaurent) -> HLaurent {
                (&self).$imp(&rhs)
            }
        }
    };
}

hbinop!(Add, add, add_ref);
hbinop!(Sub, sub, sub_ref);
hbinop!(Mul, mul, mul_ref);

impl Neg for HLaurent {
    type Output = HLaurent;
    fn neg(self) -> HLaurent {
        self.neg_ref()
    }
}

impl Neg for &HLaurent {
    type Output = HLaurent;
    fn neg(self) -> HLaurent {
        self.neg_ref()
    }
}

/// `1/k` as a rational.
pub(crate) fn recip(k: i64) -> Rational {
    Rational::one() / int(k)
}
