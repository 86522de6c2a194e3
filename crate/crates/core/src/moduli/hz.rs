use num_integer::Integer;

use super::psi::beta_n;
use super::qseries::{Aux, QSeries, EXACT};
use super::zeta::{zeta_neg_with, BernoulliCache};
use crate::rational::{divisors, euler_phi, int, mobius, rat, Rational};

/// `α_{n,ℓ}(ħ) = (1/n) Σ_{d|n} μ(d/(d,ℓ)) φ(n/d)/φ(ℓ/(d,ℓ)) ħ^{-d}`.
pub fn alpha_nl(n: u32, l: u32) -> QSeries {
    QSeries::from_terms(
        Aux::None,
        EXACT,
        divisors(n).into_iter().map(|d| {
            let g = d.gcd(&l);
            let c = rat(mobius(d / g) as i64 * euler_phi(n / d) as i64, euler_phi(l / g) as i64 * n as i64);
            ((-2 * d as i32, 0), c)
        }),
    )
}

/// `s^{-1}` for a nonzero Laurent series `s` in `ħ`, exact through weight `w`.
fn laurent_inverse(s: &QSeries, w: i64) -> Option<QSeries> {
    let (&(h0, _), a) = s.terms().iter().next()?;
    let inv_a = a.recip();
    // s = a ħ^{h0/2} (1 + γ) with γ of positive weight
    let gamma = s.shift_hbar(-h0).scale(&inv_a).sub(&QSeries::one(Aux::None, EXACT)).truncate(w + h0 as i64);
    let mut recip = QSeries::one(Aux::None, w + h0 as i64);
    let mut term = recip.clone();
    loop {
        term = term.mul(&gamma).neg();
        if term.is_zero() {
            break;
        }
        recip = recip.add(&term);
    }
    Some(recip.shift_hbar(-h0).scale(&inv_a).truncate(w))
}

/// `Ψ_{n,ℓ}(ħ) = Σ_k ζ(-k) α_{n,ℓ}^{-k} + α_{n,ℓ} log(nħ^nα_n) + 1/(nħ^n) - α_{n,ℓ}`
/// through `ħ^order`, or `None` when `α_{n,ℓ}` vanishes.
pub fn psi_nl(n: u32, l: u32, order: i64, cache: &mut BernoulliCache) -> Option<QSeries> {
    let w = 2 * order;
    let a = alpha_nl(n, l);
    let inv = laurent_inverse(&a, w)?;
    let mut acc = QSeries::hbar_series(order);
    if let Some(start) = inv.min_weight().filter(|&m| m > 0) {
        let mut power = QSeries::one(Aux::None, w);
        let mut k = 1u32;
        while start * k as i64 <= w {
            power = power.mul(&inv);
            acc = acc.add(&power.scale(&zeta_neg_with(cache, k)));
            k += 1;
        }
    }
    let depth = -a.min_weight().unwrap_or(0);
    let log = beta_n(n).truncate(w + depth).log1p().expect("β_n has positive weight");
    let inv_t = QSeries::monomial(Aux::None, -2 * n as i32, 0, rat(1, n as i64), EXACT);
    Some(acc.add(&a.mul(&log)).add(&inv_t).sub(&a).truncate(w))
}

/// The Harer-Zagier double series with its diagnostics.
#[derive(Clone, Debug)]
pub struct HarerZagierReport {
    pub series: QSeries,
    pub n_cut: u32,
    pub l_cut: u32,
    /// `(n, ℓ)` with `α_{n,ℓ} = 0`, where `Ψ_{n,ℓ}` is undefined.
    pub skipped: Vec<(u32, u32)>,
    /// Coefficients at exponents other than `ħ^{2γ-1}`, `γ ≥ 1` (doubled exponent, value).
    pub violations: Vec<(i32, Rational)>,
}

impl HarerZagierReport {
    pub fn hbar1(&self) -> Rational {
        self.series.hbar_coeff(1)
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut out = vec![format!(
            "double sum over n <= {} and l <= {} is cut; the double sum does not converge hbar-adically",
            self.n_cut, self.l_cut
        )];
        if !self.skipped.is_empty() {
            out.push(format!("alpha_(n,l) vanishes for (n,l) in {:?}; those terms were skipped", self.skipped));
        }
        for (h2, c) in &self.violations {
            out.push(format!("coefficient {c} at hbar^({h2}/2) is not of the form hbar^(2g-1)"));
        }
        if self.hbar1() != int(1) {
            out.push(format!("hbar^1 coefficient is {}, expected e(|M_1,1|) = 1", self.hbar1()));
        }
        out
    }
}

/// `Σ_n φ(n)/n Σ_ℓ μ(ℓ) Ψ_{n,ℓ}(ħ)` through `ħ^order` with `n, ℓ ≤ order`.
pub fn harer_zagier_b(order: i64) -> HarerZagierReport {
    let cut = order.max(1) as u32;
    harer_zagier_b_with_cuts(order, cut, cut)
}

pub fn harer_zagier_b_with_cuts(order: i64, n_cut: u32, l_cut: u32) -> HarerZagierReport {
    let mut cache = BernoulliCache::new();
    let mut series = QSeries::hbar_series(order);
    let mut skipped = Vec::new();
    for n in 1..=n_cut {
        let phi = rat(euler_phi(n) as i64, n as i64);
        for l in 1..=l_cut {
            let mu = mobius(l);
            if mu == 0 {
                continue;
            }
            match psi_nl(n, l, order, &mut cache) {
                Some(p) => series = series.add(&p.scale(&(&phi * int(mu as i64)))),
                None => skipped.push((n, l)),
            }
        }
    }
    let violations = series
        .terms()
        .iter()
        .filter(|(&(h2, _), _)| !(h2 > 0 && h2 % 4 == 2))
        .map(|(&(h2, _), c)| (h2, c.clone()))
        .collect();
    HarerZagierReport { series, n_cut, l_cut, skipped, violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_11() {
        assert_eq!(alpha_nl(1, 1), QSeries::monomial(Aux::None, -2, 0, int(1), EXACT));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = alpha_nl(6, 1);
        let inv = laurent_inverse(&a, 20).unwrap();
        assert_eq!(a.mul(&inv).truncate(8), QSeries::one(Aux::None, 8));
    }

    #[test]
    fn report_is_produced() {
        let r = harer_zagier_b(4);
        assert_eq!(r.n_cut, 4);
        assert!(!r.warnings().is_empty());
    }
}
