use std::collections::BTreeMap;

use num_traits::Zero;

use super::qseries::{Aux, QSeries, EXACT};
use super::zeta::{zeta_neg_with, BernoulliCache};
use crate::error::{Error, Result};
use crate::graphzoo::wick_rank_sum;
use crate::rational::{binomial, factorial, int, matchings, rat, Rational};

/// How [`formal_integral_1v`] evaluates the integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Expand the exponential and integrate Gaussian moments.
    Moments,
    /// Sum over stable graphs weighted by `1/|Aut|`.
    Wick,
}

/// `ξ²/(2ħ)`.
fn gaussian_part(max_weight: i64) -> QSeries {
    QSeries::monomial(Aux::Xi, -2, 2, rat(1, 2), max_weight)
}

/// Checks `f = x²/2 + (terms of weight > 2)` and returns the perturbation `f - x²/2`.
fn perturbation(f: &QSeries) -> Result<QSeries> {
    if f.aux() != Aux::X {
        return Err(Error::Normalization(format!("expected a series in x, got {:?}", f.aux())));
    }
    if f.coeff(0, 2) != rat(1, 2) {
        return Err(Error::Normalization(format!("coefficient of x^2 is {}, expected 1/2", f.coeff(0, 2))));
    }
    let rest = f.sub(&QSeries::monomial(Aux::X, 0, 2, rat(1, 2), EXACT));
    for &(h2, deg) in rest.terms().keys() {
        if h2 + deg as i32 <= 2 {
            return Err(Error::Normalization(format!(
                "term hbar^({h2}/2) x^{deg} has weight {} but must exceed 2",
                h2 + deg as i32
            )));
        }
    }
    Ok(rest)
}

/// `log ∫ exp(ħ^{-1}(xξ - f)) dx/√(2πħ)` as a series in `ξ` and `ħ`.
///
/// `f` must be `x²/2` plus terms `ħ^g x^n` of weight `2g + n > 2`. The result is
/// exact through weight `f.max_weight() - 2`, where `ħ^a ξ^k` has weight `2a + k`.
pub fn formal_integral_1v(f: &QSeries, route: Route) -> Result<QSeries> {
    let rest = perturbation(f)?;
    let w = f.max_weight().saturating_sub(2);
    match route {
        Route::Moments => moments_route(&rest, w),
        Route::Wick => wick_route(&rest, w),
    }
}

fn moments_route(rest: &QSeries, w: i64) -> Result<QSeries> {
    let inv_hbar = QSeries::monomial(Aux::X, -2, 0, int(-1), EXACT);
    let potential = rest.mul(&inv_hbar).truncate(w);
    let e = potential.exp()?;
    // ∫ x^k e^{(xξ - x²/2)/ħ} dx/√(2πħ) = e^{ξ²/2ħ} Σ_j C(k,j) ξ^{k-j} (j-1)!! ħ^{j/2}
    let mut terms = Vec::new();
    for (&(h2, k), c) in e.terms() {
        for j in (0..=k).step_by(2) {
            let coeff = Rational::from_integer(binomial(k, j) * matchings(j)) * c;
            terms.push(((h2 + j as i32, k - j), coeff));
        }
    }
    let moments = QSeries::from_terms(Aux::Xi, w, terms);
    Ok(moments.log()?.add(&gaussian_part(w)))
}

fn wick_route(rest: &QSeries, w: i64) -> Result<QSeries> {
    let mut a: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
    for (&(h2, n), c) in rest.terms() {
        if h2 % 2 != 0 || h2 < 0 {
            return Err(Error::Invalid(format!("wick route needs integer hbar powers, found hbar^({h2}/2)")));
        }
        // Vertices carry -f_{g,n}: the integrand is exp(-f/ħ).
        a.insert(((h2 / 2) as u32, n), -Rational::from_integer(factorial(n)) * c);
    }
    let mut out = gaussian_part(w);
    for g in 0..=((w + 2) / 2) as u32 {
        for n in 0..=(w + 2 - 2 * g as i64).max(0) as u32 {
            if 2 * g as i64 - 2 + n as i64 > w || 2 * g + n <= 2 {
                continue;
            }
            let big_f = wick_rank_sum(g, n, &a)?;
            if !big_f.is_zero() {
                let c = big_f / Rational::from_integer(factorial(n));
                out = out.add(&QSeries::monomial(Aux::Xi, 2 * g as i32 - 2, n, c, w));
            }
        }
    }
    Ok(out)
}

/// Builds `f = x²/2 + Σ f_{g,n} ħ^g x^n/n!` exact through weight `max_weight`.
pub fn potential_from_coefficients(coeffs: &BTreeMap<(u32, u32), Rational>, max_weight: i64) -> QSeries {
    let mut terms = vec![((0, 2), rat(1, 2))];
    for (&(g, n), c) in coeffs {
        terms.push(((2 * g as i32, n), c / Rational::from_integer(factorial(n))));
    }
    QSeries::from_terms(Aux::X, max_weight, terms)
}

/// Both sides of the Stirling identity through `ħ^order` inside the bracket:
/// `log∫ exp(ħ^{-1}(xξ + x + log(1-x)))` against
/// `ħ^{-1}(ξ - log(1+ξ) - ħ log(1+ξ) + Σ_{g≥2} ζ(1-g)/(1-g) ħ^g)`.
pub fn stirling_check(order: u32) -> Result<(QSeries, QSeries)> {
    let w = 2 * order as i64 - 2;
    // f = -x - log(1-x) = Σ_{k≥2} x^k/k
    let f = QSeries::from_terms(Aux::X, w + 2, (2..=(w + 2) as u32).map(|k| ((0, k), rat(1, k as i64))));
    let left = formal_integral_1v(&f, Route::Moments)?;
    let mut terms = Vec::new();
    for k in 1..=(w + 2) as u32 {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        // ħ^{-1}(ξ - log(1+ξ)) has no linear term
        if k >= 2 {
            terms.push(((-2, k), rat(sign, k as i64)));
        }
        terms.push(((0, k), rat(sign, k as i64)));
    }
    let mut cache = BernoulliCache::new();
    for g in 2..=order {
        let z = zeta_neg_with(&mut cache, g - 1) / int(1 - g as i64);
        terms.push(((2 * (g as i32 - 1), 0), z));
    }
    let right = QSeries::from_terms(Aux::Xi, w, terms);
    Ok((left, right))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_gaussian() {
        let f = QSeries::monomial(Aux::X, 0, 2, rat(1, 2), 8);
        for route in [Route::Moments, Route::Wick] {
            assert_eq!(formal_integral_1v(&f, route).unwrap(), gaussian_part(6));
        }
    }

    #[test]
    fn normalization_rejected() {
        let f = QSeries::monomial(Aux::X, 0, 2, int(1), 8);
        assert!(matches!(formal_integral_1v(&f, Route::Moments), Err(Error::Normalization(_))));
        let g = potential_from_coefficients(&BTreeMap::from([((0, 1), int(1))]), 6);
        assert!(matches!(formal_integral_1v(&g, Route::Moments), Err(Error::Normalization(_))));
    }

    #[test]
    fn low_order_wick_values() {
        let coeffs = BTreeMap::from([((1, 1), int(2)), ((0, 3), int(3)), ((0, 4), int(5))]);
        let f = potential_from_coefficients(&coeffs, 4);
        let out = formal_integral_1v(&f, Route::Moments).unwrap();
        // F_{1,1} = -f_{1,1} - f_{0,3}/2
        assert_eq!(out.coeff(0, 1), rat(-7, 2));
        // F_{0,4}/4! = (-f_{0,4} + 3 f_{0,3}^2)/24
        assert_eq!(out.coeff(-2, 4), rat(22, 24));
    }

    #[test]
    fn routes_agree() {
        let coeffs = BTreeMap::from([((0, 3), int(2)), ((0, 4), int(-1)), ((1, 1), int(3)), ((1, 2), int(-2)), ((2, 0), int(1))]);
        let f = potential_from_coefficients(&coeffs, 6);
        assert_eq!(formal_integral_1v(&f, Route::Moments).unwrap(), formal_integral_1v(&f, Route::Wick).unwrap());
    }

    #[test]
    fn stirling_low_order() {
        let (l, r) = stirling_check(5).unwrap();
        assert_eq!(l, r);
        assert_eq!(l.coeff(2, 0), rat(1, 12));
        assert_eq!(l.coeff(4, 0), rat(0, 1));
    }
}
