use std::collections::HashMap;

use num_traits::Zero;

use super::psi::{alpha_n, beta_n, parity_c, psi, psi_n};
use super::qseries::{Aux, QSeries, EXACT};
use crate::cyclic::{named_char, NamedOperad};
use crate::error::{Error, Result};
use crate::exactsym::{e, Partition};
use crate::hlaurent::{coupled_integral, moment_coeff, HLaurent, HMono, Measure, TruncationSpec};
use crate::rational::{binomial, euler_phi, int, mobius, rat, Rational};

/// How [`i_n_series`] evaluates `I_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InRoute {
    /// Gaussian moments of the shifted one-variable integral.
    Integral,
    /// `q/(nħ^n) - (α_n + 1) log(1 + q) + Ψ_n`.
    Closed,
}

/// Sign convention of the closed form for `-ħ^{-1}e_2 + CCh(F_Det Ass)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    /// `-ħ^{-1}p_1 + (ħ^{-1}+1) Σ φ(n)/n log(1+p_n) - Ψ`, which the integral reproduces.
    Standard,
    /// `ħ^{-1}p_1 - (ħ^{-1}+1) Σ φ(n)/n log(1+p_n) - Ψ`: the `p`-dependent part negated.
    NegatedP,
}

/// `I_n(q_n, ħ)` exact through weight `max_weight`, with `ħ` of weight 2 and `q_n` of weight `n`.
pub fn i_n_series(n: u32, max_weight: i64, route: InRoute) -> Result<QSeries> {
    if n == 0 {
        return Err(Error::Invalid("I_n needs n >= 1".into()));
    }
    if max_weight < 0 {
        return Err(Error::Window(format!("negative weight bound {max_weight}")));
    }
    match route {
        InRoute::Integral => Ok(i_n_integral(n, max_weight)),
        InRoute::Closed => Ok(i_n_closed(n, max_weight)),
    }
}

/// Completing the square against `dμ⁻` leaves
/// `I_n = q²/2t - c q/(nħ^{n/2}) + log E[G(q + S)]` with `t = nħ^n`,
/// `S` distributed as `p_n` under `dμ⁻` and
/// `log G(p) = -(β - cħ^{n/2})p/t - βp²/2t - (1+β)/t Σ_{k≥3} p^k/k`.
fn i_n_integral(n: u32, w: i64) -> QSeries {
    let aux = Aux::Q(n);
    let ni = n as i64;
    let c = parity_c(n);
    let half = n as i32; // doubled exponent of ħ^{n/2}
    let inv_t = |h2: i32| h2 - 2 * n as i32;
    let beta = beta_n(n);
    let mut terms: Vec<((i32, u32), Rational)> = Vec::new();
    for (&(h2, _), b) in beta.terms() {
        let lin = if c == 1 && h2 == half { b - int(1) } else { b.clone() };
        if !lin.is_zero() {
            terms.push(((inv_t(h2), 1), -lin / int(ni)));
        }
        terms.push(((inv_t(h2), 2), -b / int(2 * ni)));
    }
    let kmax = ((w + 2 * ni) / ni) as u32;
    let one_plus_beta: Vec<(i32, Rational)> =
        std::iter::once((0, int(1))).chain(beta.terms().iter().map(|(&(h2, _), b)| (h2, b.clone()))).collect();
    for k in 3..=kmax {
        for (h2, b) in &one_plus_beta {
            terms.push(((inv_t(*h2), k), -b / int(ni * k as i64)));
        }
    }
    let log_g = QSeries::from_terms(aux, w, terms);
    let g = log_g.exp().expect("log G has positive weight");
    let mut expect = Vec::new();
    for (&(h2, m), v) in g.terms() {
        for a in 0..=m {
            let mc = moment_coeff(n, a, Measure::MuReflected);
            if mc.is_zero() {
                continue;
            }
            let coeff = Rational::from_integer(binomial(m, a)) * mc * v;
            expect.push(((h2 + (n * a) as i32, m - a), coeff));
        }
    }
    let log_e = QSeries::from_terms(aux, w, expect).log().expect("expectation has constant term 1");
    let gauss = QSeries::from_terms(aux, w, [((-2 * n as i32, 2), rat(1, 2 * ni)), ((-half, 1), rat(-c, ni))]);
    log_e.add(&gauss)
}

fn i_n_closed(n: u32, w: i64) -> QSeries {
    let aux = Aux::Q(n);
    let ni = n as i64;
    // α_n starts at ħ^{-n}, so log(1+q) is needed to weight w + 2n.
    let log = QSeries::monomial(aux, 0, 1, int(1), w + 2 * ni).log1p().expect("q has positive weight");
    let alpha_plus_one = alpha_n(n).with_aux(aux).add(&QSeries::one(aux, EXACT));
    let lin = QSeries::monomial(aux, -2 * n as i32, 1, rat(1, ni), EXACT);
    let constant = psi_n(n, (w + 1) / 2).with_aux(aux);
    lin.sub(&alpha_plus_one.mul(&log)).add(&constant).truncate(w)
}

/// `ħ^{-1} e_2(q)`.
fn e2_over_hbar_q(w: i64) -> HLaurent {
    HLaurent::from_symfunc_q(&e(2, 2), -2).assume_exact_to(w)
}

/// `CCh(F_Det Ass) = -Σ_{n,ℓ} μ(ℓ)/ℓ I_n(q_{ℓn}, ħ^ℓ) + ħ^{-1}e_2`, renamed `q ↦ p`.
///
/// Only the terms with `|p| ≤ max_weight + 2` are assembled, which is every term
/// of weight at most `max_weight` once the `ħ^{< -1}` parts cancel. The
/// cancellation is checked.
pub fn f_det_ass_integral(max_weight: i64) -> Result<HLaurent> {
    f_det_ass_from_in(max_weight, InRoute::Integral)
}

/// The same assembly with the closed form of `I_n`.
pub fn f_det_ass_from_in(max_weight: i64, route: InRoute) -> Result<HLaurent> {
    let w = max_weight;
    if w < 0 {
        return Err(Error::Window(format!("negative weight bound {w}")));
    }
    let p_cap = (w + 2) as u32;
    // q-free part: Ψ_n(ħ^ℓ) = O(ħ^{ℓ⌈n/6⌉}) vanishes below weight w unless ℓ ≤ w/2 and n ≤ 3w.
    let n_const = 3 * w.max(1) as u32;
    let mut map: HashMap<HMono, Rational> = HashMap::new();
    for l in 1..=p_cap {
        let mu = mobius(l);
        if mu == 0 {
            continue;
        }
        let inner = w / l as i64;
        let weight_l = rat(-mu as i64, l as i64);
        for n in 1..=p_cap.max(n_const) {
            let q_terms = l * n <= p_cap;
            let const_terms = n <= n_const && 2 * l as i64 <= w;
            if !q_terms && !const_terms {
                continue;
            }
            let i_n = i_n_series(n, inner, route)?;
            for (&(h2, k), c) in i_n.terms() {
                if (k == 0 && !const_terms) || (k > 0 && !(q_terms && l * n * k <= p_cap)) {
                    continue;
                }
                let q = Partition::from_parts(vec![l * n; k as usize]);
                let mono = HMono::new(h2 * l as i32, Partition::empty(), q);
                *map.entry(mono).or_insert_with(Rational::zero) += c * &weight_l;
            }
        }
    }
    let t = TruncationSpec::weight(w).with_q_max(p_cap);
    let sum = HLaurent::from_terms(t, map) + e2_over_hbar_q(w).cap_q(p_cap);
    finish(sum)
}

/// Checks that no `ħ^{< -1}` term survives and renames `q ↦ p`.
fn finish(sum: HLaurent) -> Result<HLaurent> {
    if let Some((k, c)) = sum.iter().find(|(k, _)| k.h2 < -2) {
        return Err(Error::Invalid(format!("uncancelled term {c} at hbar^({}/2) q{}", k.h2, k.q)));
    }
    sum.rename_q_to_p()
}

/// `CCh(F_Det Ass)` from the closed form of `-ħ^{-1}e_2 + CCh(F_Det Ass)`, exact
/// through weight `max_weight`.
pub fn f_det_ass_closed(max_weight: i64, form: ClosedForm) -> HLaurent {
    let w = max_weight;
    let sign = match form {
        ClosedForm::NegatedP => int(1),
        ClosedForm::Standard => int(-1),
    };
    let mut terms: Vec<(HMono, Rational)> = vec![(HMono::new(-2, Partition::from_parts(vec![1]), Partition::empty()), sign.clone())];
    for n in 1..=(w + 2) as u32 {
        let phi = rat(euler_phi(n) as i64, n as i64);
        for k in 1..=((w + 2) / n as i64) as u32 {
            let log_coeff = rat(if k % 2 == 1 { 1 } else { -1 }, k as i64);
            let c = -sign.clone() * &phi * log_coeff;
            let p = Partition::from_parts(vec![n; k as usize]);
            terms.push((HMono::new(-2, p.clone(), Partition::empty()), c.clone()));
            terms.push((HMono::new(0, p, Partition::empty()), c));
        }
    }
    for (&(h2, _), c) in psi((w / 2).max(1)).terms() {
        terms.push((HMono::new(h2, Partition::empty(), Partition::empty()), -c.clone()));
    }
    let rhs = HLaurent::from_terms(TruncationSpec::weight(w).with_hexp_min_x2(-2), terms);
    rhs + HLaurent::from_symfunc(&e(2, 2), -2).assume_exact_to(w)
}

/// `CCh(F_Det Ass) = -Log ∫ Exp(ħ^{-1}p_1q_1 - CCh Ass) dμ⁻(p) + ħ^{-1}e_2(q)`, renamed `q ↦ p`.
///
/// The reflected measure is the one for which the identity holds; with `dμ`
/// itself the result is off, starting with an extra `-ħ^{-1}p_2`.
pub fn f_det_ass_functional(max_weight: i64, measure: Measure) -> Result<HLaurent> {
    let w = max_weight;
    let p_cap = (w + 2) as u32;
    let ch = named_char(NamedOperad::Ass, p_cap);
    let cch = HLaurent::from_symfunc(&ch, -2);
    let integrand = (-&cch).pleth_exp()?;
    let z = coupled_integral(&integrand, measure, p_cap)?;
    let sum = -&z.pleth_log()? + e2_over_hbar_q(w).cap_q(p_cap);
    finish(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_1_closed_terms() {
        let i1 = i_n_series(1, 6, InRoute::Closed).unwrap();
        // q/ħ - (ħ^{-1} + 1) log(1 + q): the q/ħ parts cancel
        assert!(i1.coeff(-2, 1).is_zero());
        assert_eq!(i1.coeff(-2, 2), rat(1, 2));
        assert_eq!(i1.coeff(0, 1), int(-1));
        assert_eq!(i1.coeff(2, 0), rat(1, 12));
    }

    #[test]
    fn i_n_routes_agree() {
        for n in 1..=8 {
            let a = i_n_series(n, 8, InRoute::Integral).unwrap();
            let b = i_n_series(n, 8, InRoute::Closed).unwrap();
            assert_eq!(a, b, "n = {n}");
        }
    }

    #[test]
    fn three_routes_agree() {
        let w = 6;
        let closed = f_det_ass_closed(w, ClosedForm::Standard);
        let integral = f_det_ass_integral(w).unwrap();
        let functional = f_det_ass_functional(w, Measure::MuReflected).unwrap();
        assert!(integral.agrees_with(&closed), "{:?}", integral.first_difference(&closed));
        assert!(functional.agrees_with(&closed), "{:?}", functional.first_difference(&closed));
        assert!(!f_det_ass_closed(w, ClosedForm::NegatedP).agrees_with(&closed));
        let plain = f_det_ass_functional(w, Measure::Mu).unwrap();
        let diff = &plain - &closed;
        let lead = diff.hbar_coeff(-2);
        assert_eq!(lead.coeff(&Partition::from_parts(vec![2])), int(-1));
        assert!(lead.iter().all(|(k, _)| k.parts().iter().all(|&x| x == 2)));
    }

    #[test]
    fn hbar_inverse_part_is_minus_omega_tilde_ass() {
        let w = 6;
        let cch = f_det_ass_closed(w, ClosedForm::Standard);
        let ass = named_char(NamedOperad::Ass, (w + 2) as u32).omega_tilde();
        let expected = HLaurent::from_symfunc(&ass, -2).scale(&int(-1));
        assert_eq!(cch.hbar_coeff(-2), expected.hbar_coeff(-2));
    }
}
