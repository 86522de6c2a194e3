use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::series::{acc, min_q, HLaurent, HMono, TruncationSpec};
use crate::error::{Error, Result};
use crate::exactsym::Partition;
use crate::moduli::{Aux, QSeries, EXACT};
use crate::rational::{binomial, factorial, matchings, Rational};

/// Formal Gaussian measures on the power sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Measure {
    /// `dν`: centred, `p_n` of variance `nħ^n`.
    Nu,
    /// `dμ`: `dν` translated by `ħ^{n/2}` in every even `p_n`, normalized.
    Mu,
    /// `dμ` reflected through the origin: translated by `-ħ^{n/2}` in even `p_n`.
    MuReflected,
}

impl Measure {
    fn shift_sign(self, n: u32) -> i64 {
        if n % 2 == 1 {
            return 0;
        }
        match self {
            Measure::Nu => 0,
            Measure::Mu => 1,
            Measure::MuReflected => -1,
        }
    }
}

/// Coefficient `c` in `∫ p_n^m = c·ħ^{nm/2}`. Every moment is homogeneous of
/// weight `nm`, matching the weight of `p_n^m`.
pub fn moment_coeff(n: u32, m: u32, measure: Measure) -> Rational {
    let s = measure.shift_sign(n);
    // E[(s ħ^{n/2} + Y)^m] with Var Y = nħ^n:
    //   ħ^{nm/2} Σ_{j even} C(m,j) s^{m-j} (j-1)!! n^{j/2}
    let mut total = BigInt::zero();
    for j in (0..=m).step_by(2) {
        let rest = m - j;
        let shift = if rest == 0 { BigInt::one() } else { BigInt::from(s).pow(rest) };
        if shift.is_zero() {
            continue;
        }
        total += binomial(m, j) * shift * matchings(j) * BigInt::from(n).pow(j / 2);
    }
    Rational::from_integer(total)
}

/// `∫ p_n^m dmeasure` as a one-term series in `ħ^{1/2}`.
pub fn gaussian_moment(n: u32, m: u32, measure: Measure) -> QSeries {
    QSeries::monomial(Aux::None, (n * m) as i32, 0, moment_coeff(n, m, measure), EXACT)
}

fn monomial_integral(p: &Partition, measure: Measure, cache: &mut HashMap<(u32, u32), Rational>) -> Rational {
    let mut c = Rational::one();
    for (n, m) in p.multiplicities() {
        let v = cache.entry((n, m)).or_insert_with(|| moment_coeff(n, m, measure)).clone();
        if v.is_zero() {
            return v;
        }
        c *= v;
    }
    c
}

/// `∫ F dmeasure(p)`: each `p`-monomial is replaced by its Gaussian moment.
///
/// `F` is a finite truncated sum, so the integral is a finite sum. Moments
/// preserve weight, so the output is exact wherever `F` is: the requested
/// `out` window must not exceed the weight and `q` bounds certified by `F`.
pub fn functional_integral(f: &HLaurent, measure: Measure, out: &TruncationSpec) -> Result<HLaurent> {
    if out.max_weight > f.max_weight() {
        return Err(Error::Window(format!(
            "requested weight {} exceeds the integrand's certified weight {}",
            out.max_weight,
            f.max_weight()
        )));
    }
    if let (Some(fq), Some(oq)) = (f.q_max(), out.q_max) {
        if oq > fq {
            return Err(Error::Window(format!("requested |q| <= {} exceeds the integrand's cap {}", oq, fq)));
        }
    }
    let t = TruncationSpec { q_max: min_q(f.q_max(), out.q_max), ..*out };
    let mut cache = HashMap::new();
    let mut map = HashMap::new();
    for (k, c) in f.iter() {
        if k.weight() > t.max_weight {
            continue;
        }
        let v = monomial_integral(&k.p, measure, &mut cache);
        if !v.is_zero() {
            let key = HMono::new(k.h2 + k.p.weight() as i32, Partition::empty(), k.q.clone());
            acc(&mut map, key, c * v);
        }
    }
    Ok(HLaurent::from_map(t, map))
}

/// `(Δh2, k, coefficient)` for one term `ħ^{Δh2/2} q_n^k` of a coupling factor.
type Factor = (i32, u32, Rational);

/// `∫ Exp(ħ^{-1} p_1 q_1)·F(p) dmeasure(p)` for `q`-free `F`, as a series in `q`
/// with `|q| ≤ q_max`.
///
/// `Exp(ħ^{-1}p_1q_1) = Π_n exp(p_n q_n / nħ^n)`, so each `p`-monomial integrates
/// to a product over `n ≤ q_max` of one-variable factors
/// `Σ_k q_n^k/(k! (nħ^n)^k) ∫ p_n^{m+k}`; the coupling has weight 0, so the
/// output is exact to the weight of `F`.
pub fn coupled_integral(f: &HLaurent, measure: Measure, q_max: u32) -> Result<HLaurent> {
    if f.iter().any(|(k, _)| !k.q.is_empty()) {
        return Err(Error::Invalid("coupled integral expects an integrand in p only".into()));
    }
    let t = TruncationSpec::weight(f.max_weight()).with_q_max(q_max);
    let mut factor_cache: HashMap<(u32, u32), Vec<Factor>> = HashMap::new();
    let mut out = HashMap::new();
    for (k, c) in f.iter() {
        // (h2, q-partition) → coefficient
        let mut cur: Vec<(i32, Partition, Rational)> = vec![(k.h2, Partition::empty(), c.clone())];
        for n in 1..=q_max.max(k.p.parts().first().copied().unwrap_or(0)) {
            let m = k.p.count(n);
            let fac = factor_cache
                .entry((n, m))
                .or_insert_with(|| coupling_factor(n, m, measure, q_max))
                .clone();
            let mut next: HashMap<(i32, Partition), Rational> = HashMap::new();
            for (h2, q, v) in &cur {
                for (dh, kq, w) in &fac {
                    if q.weight() + kq * n > q_max {
                        continue;
                    }
                    let mut qq = q.clone();
                    for _ in 0..*kq {
                        qq = qq.with_part(n);
                    }
                    *next.entry((h2 + dh, qq)).or_insert_with(Rational::zero) += v * w;
                }
            }
            cur = next.into_iter().filter(|(_, v)| !v.is_zero()).map(|((h, q), v)| (h, q, v)).collect();
            if cur.is_empty() {
                break;
            }
        }
        for (h2, q, v) in cur {
            acc(&mut out, HMono::new(h2, Partition::empty(), q), v);
        }
    }
    Ok(HLaurent::from_map(t, out))
}

/// `∫ p_n^m exp(p_n q_n / nħ^n)` as `[(Δh2, k, coeff)]` for the powers `q_n^k`, `nk ≤ q_max`.
fn coupling_factor(n: u32, m: u32, measure: Measure, q_max: u32) -> Vec<Factor> {
    let mut out = Vec::new();
    let mut k = 0u32;
    while n * k <= q_max {
        let mc = moment_coeff(n, m + k, measure);
        if !mc.is_zero() {
            let denom = Rational::from_integer(factorial(k) * BigInt::from(n).pow(k));
            // ħ^{n(m+k)/2} from the moment, ħ^{-nk} from the coupling
            let h2 = (n * (m + k)) as i32 - 2 * (n * k) as i32;
            out.push((h2, k, mc / denom));
        }
        k += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn moment_examples() {
        assert_eq!(gaussian_moment(1, 2, Measure::Nu), QSeries::monomial(Aux::None, 2, 0, int(1), EXACT));
        assert!(gaussian_moment(1, 1, Measure::Mu).is_zero());
        assert_eq!(gaussian_moment(2, 1, Measure::Mu), QSeries::monomial(Aux::None, 2, 0, int(1), EXACT));
        assert_eq!(gaussian_moment(2, 1, Measure::MuReflected).hbar_coeff(1), int(-1));
        // E[(ħ + Y)^2] = ħ^2 + 2ħ^2
        assert_eq!(moment_coeff(2, 2, Measure::Mu), int(3));
        assert_eq!(moment_coeff(3, 4, Measure::Nu), int(27));
    }

    #[test]
    fn integral_of_one() {
        let one = HLaurent::one(4);
        let r = functional_integral(&one, Measure::Mu, &TruncationSpec::weight(4)).unwrap();
        assert_eq!(r.terms(), one.terms());
    }

    #[test]
    fn window_is_enforced() {
        let one = HLaurent::one(4);
        assert!(functional_integral(&one, Measure::Mu, &TruncationSpec::weight(5)).is_err());
    }
}
