use std::collections::BTreeMap;

use num_traits::Zero;

use super::qseries::{Aux, QSeries, EXACT};
use super::zeta::{zeta_neg_with, BernoulliCache};
use crate::hlaurent::HLaurent;
use crate::rational::{divisors, euler_phi, int, mobius, rat, Rational};

/// `c(n) = 1` for even `n`, `0` for odd `n`.
pub fn parity_c(n: u32) -> i64 {
    n.is_multiple_of(2) as i64
}

/// `α_n(ħ) = (1/n) Σ_{d|n} φ(d) ħ^{-n/d}`, an exact Laurent polynomial.
pub fn alpha_n(n: u32) -> QSeries {
    QSeries::from_terms(
        Aux::None,
        EXACT,
        divisors(n).into_iter().map(|d| ((-2 * (n / d) as i32, 0), rat(euler_phi(d) as i64, n as i64))),
    )
}

/// `β_n = nħ^n α_n - 1 = Σ_{d|n, d>1} φ(d) ħ^{n - n/d}`.
pub fn beta_n(n: u32) -> QSeries {
    QSeries::from_terms(
        Aux::None,
        EXACT,
        divisors(n).into_iter().filter(|&d| d > 1).map(|d| ((2 * (n - n / d) as i32, 0), int(euler_phi(d) as i64))),
    )
}

/// `1/(nħ^n)` as an exact monomial.
fn inv_t(n: u32) -> QSeries {
    QSeries::monomial(Aux::None, -2 * n as i32, 0, rat(1, n as i64), EXACT)
}

/// `Σ_{k≥1} ζ(-k)/(-k) α_n^{-k}` through `ħ^order`.
pub(crate) fn zeta_block(n: u32, order: i64, cache: &mut BernoulliCache) -> QSeries {
    let w = 2 * order;
    let mut acc = QSeries::hbar_series(order);
    if order < n as i64 {
        return acc;
    }
    let beta = beta_n(n).truncate(w);
    // (1+β)^{-1} = Σ (-β)^j
    let recip = {
        let mut r = QSeries::one(Aux::None, w);
        let mut term = QSeries::one(Aux::None, w);
        loop {
            term = term.mul(&beta).neg();
            if term.is_zero() {
                break;
            }
            r = r.add(&term);
        }
        r
    };
    let t = QSeries::monomial(Aux::None, 2 * n as i32, 0, int(n as i64), w);
    let inv_alpha = t.mul(&recip);
    let mut power = QSeries::one(Aux::None, w);
    let mut k = 1u32;
    while (n * k) as i64 <= order {
        power = power.mul(&inv_alpha);
        let z = zeta_neg_with(cache, k) / int(-(k as i64));
        acc = acc.add(&power.scale(&z));
        k += 1;
    }
    acc
}

/// `Ψ_n(ħ)` through `ħ^order`:
/// `Σ ζ(-k)/(-k) α_n^{-k} + (α_n + 1/2) log(nħ^nα_n) - α_n + 1/(nħ^n) - c(n)/2n`.
pub fn psi_n(n: u32, order: i64) -> QSeries {
    psi_n_with(n, order, &mut BernoulliCache::new())
}

fn psi_n_with(n: u32, order: i64, cache: &mut BernoulliCache) -> QSeries {
    let w = 2 * order;
    let zeta = zeta_block(n, order, cache);
    // log(1+β) is needed to weight w + 2n because α_n starts at ħ^{-n}.
    let log = beta_n(n).truncate(w + 2 * n as i64).log1p().expect("β_n has positive weight");
    let half = QSeries::one(Aux::None, EXACT).scale(&rat(1, 2));
    let mixed = alpha_n(n).add(&half).mul(&log);
    let constant = QSeries::one(Aux::None, EXACT).scale(&rat(-parity_c(n), 2 * n as i64));
    zeta.add(&mixed).sub(&alpha_n(n)).add(&inv_t(n)).add(&constant).truncate(w)
}

/// `Ψ(ħ) = Σ_n Σ_ℓ μ(ℓ)/ℓ Ψ_n(ħ^ℓ)` through `ħ^order`, cut at `n ≤ 6·order`, `ℓ ≤ order`.
pub fn psi(order: i64) -> QSeries {
    psi_with_cuts(order, 6 * order as u32, order as u32)
}

/// [`psi`] with explicit cuts on `n` and `ℓ`.
pub fn psi_with_cuts(order: i64, n_cut: u32, l_cut: u32) -> QSeries {
    let mut cache = BernoulliCache::new();
    let mut acc = QSeries::hbar_series(order);
    for l in 1..=l_cut {
        let mu = mobius(l);
        if mu == 0 {
            continue;
        }
        // Ψ_n(ħ^ℓ) through ħ^order needs Ψ_n through ħ^{⌈order/ℓ⌉}.
        let inner = (order + l as i64 - 1) / l as i64;
        for n in 1..=n_cut {
            let term = psi_n_with(n, inner, &mut cache).hbar_power(l);
            acc = acc.add(&term.scale(&rat(mu as i64, l as i64)));
        }
    }
    acc.truncate(2 * order)
}

/// Lowest `ħ` exponent present (as a rational, exponents may be halves).
pub fn hbar_order(s: &QSeries) -> Option<Rational> {
    s.min_hexp_x2().map(|h| rat(h as i64, 2))
}

/// Source for [`euler_chi_extract`].
pub enum EulerSource<'a> {
    /// `Ψ(ħ)`: the coefficient of `ħ^k` is the sum over `χ = -k`.
    Psi(&'a QSeries),
    /// `-ħ^{-1}e_2 + CCh(F_Det Ass)`, whose `p`-free part is `-Ψ(ħ)`.
    FDetAss(&'a HLaurent),
}

/// Sums `Σ_{2(1-γ)-ν = χ} e(|M_{γ,ν}/S_ν|)` keyed by `χ`.
pub fn euler_chi_extract(source: EulerSource<'_>) -> BTreeMap<i64, Rational> {
    let mut out = BTreeMap::new();
    match source {
        EulerSource::Psi(s) => {
            for (&(h2, deg), c) in s.terms() {
                if deg == 0 && h2 > 0 && h2 % 2 == 0 {
                    out.insert(-(h2 as i64) / 2, c.clone());
                }
            }
        }
        EulerSource::FDetAss(f) => {
            for (k, c) in f.iter() {
                if k.p.is_empty() && k.q.is_empty() && k.h2 > 0 && k.h2 % 2 == 0 {
                    out.insert(-(k.h2 as i64) / 2, -c.clone());
                }
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Whether every stored coefficient is an integer.
pub fn all_integral(values: &BTreeMap<i64, Rational>) -> bool {
    values.values().all(|v| v.is_integer())
}
