use std::collections::HashMap;

use num_traits::{One, Zero};

use super::series::{acc, recip, HLaurent, HMono, TruncationSpec};
use crate::error::{Error, Result};
use crate::exactsym::{Partition, SymFunc};
use crate::rational::{int, mobius, Rational};

impl HLaurent {
    /// `p_n ∘ g`: `ħ ↦ ħ^n`, `p_k ↦ p_{nk}`, `q_k ↦ q_{nk}`. Defined for every `g`.
    ///
    /// Terms of `g` beyond its bound `W` land above `n(W+1) - 1`, so the output
    /// bound is `min(W, n(W+1) - 1)`.
    pub fn adams(&self, n: u32) -> HLaurent {
        let t = self.trunc();
        let w = t.max_weight;
        let bound = if w >= crate::moduli::EXACT { w } else { w.min((n as i64) * (w + 1) - 1) };
        let nt = TruncationSpec {
            max_weight: bound,
            hexp_min_x2: t.hexp_min_x2.min(t.hexp_min_x2 * n as i32),
            q_max: t.q_max,
        };
        HLaurent::from_terms(
            nt,
            self.iter().map(|(k, c)| (HMono::new(k.h2 * n as i32, k.p.scale(n), k.q.scale(n)), c.clone())),
        )
    }

    /// `Σ_n (p_n ∘ self)/n`, the argument of the exponential in `Exp`.
    fn adams_sum(&self) -> HLaurent {
        let mut s = HLaurent::zero(self.trunc());
        let mut n = 1u32;
        loop {
            let a = self.adams(n);
            if a.is_zero() {
                break;
            }
            s = &s + &a.scale(&recip(n as i64));
            n += 1;
        }
        s
    }

    fn exp_series(s: &HLaurent) -> HLaurent {
        let w = s.max_weight();
        let mut out = HLaurent::one(w);
        if let Some(q) = s.q_max() {
            out = out.cap_q(q);
        }
        let mut term = out.clone();
        let mut k = 1i64;
        loop {
            term = (&term * s).scale(&recip(k));
            if term.is_zero() {
                break;
            }
            out = &out + &term;
            k += 1;
        }
        out
    }

    /// Plethystic exponential `Exp(f) = exp(Σ_{n≥1} (p_n∘f)/n)`.
    ///
    /// Requires every term of `f` to have positive weight, or weight zero with a
    /// nonempty `q`-part under a `q` cap. Then every summand of the exponential
    /// series raises `weight + |q|` and the series is finite.
    pub fn pleth_exp(&self) -> Result<HLaurent> {
        self.check_f1(true)?;
        Ok(Self::exp_series(&self.adams_sum()))
    }

    /// Plethystic logarithm `Log(F) = Σ_n μ(n)/n log(p_n ∘ F)` for `F = 1 + u`.
    pub fn pleth_log(&self) -> Result<HLaurent> {
        if self.constant_term() != Rational::one() {
            return Err(Error::NotUnit);
        }
        let mut one = HLaurent::one(self.max_weight());
        if let Some(q) = self.q_max() {
            one = one.cap_q(q);
        }
        let u = self - &one;
        u.check_f1(true)?;
        let mut out = HLaurent::zero(u.trunc());
        let mut n = 1u32;
        loop {
            let un = u.adams(n);
            if un.is_zero() {
                break;
            }
            let mu = mobius(n);
            if mu != 0 {
                out = &out + &log1p(&un).scale(&(int(mu as i64) * recip(n as i64)));
            }
            n += 1;
        }
        Ok(out)
    }

    /// `f ∘ g` for a symmetric function `f` and `g ∈ F¹` (all weights positive).
    /// Output bound: the smaller of the two.
    pub fn plethysm(f: &SymFunc, g: &HLaurent) -> Result<HLaurent> {
        g.check_f1(false)?;
        let w = (f.max_weight() as i64).min(g.max_weight());
        let g = g.truncate(w);
        let mut adams: Vec<HLaurent> = vec![HLaurent::zero(g.trunc())];
        let mut memo: HashMap<Partition, HLaurent> = HashMap::new();
        memo.insert(Partition::empty(), HLaurent::one(w));
        let mut out = HashMap::new();
        for (lambda, c) in f.iter() {
            if lambda.weight() as i64 > w {
                break;
            }
            let term = pleth_mono(lambda, &mut adams, &g, &mut memo);
            for (k, v) in term.iter() {
                acc(&mut out, k.clone(), c * v);
            }
        }
        Ok(HLaurent::from_map(TruncationSpec::weight(w).with_q_max_opt(g.q_max()), out))
    }
}

impl TruncationSpec {
    pub(crate) fn with_q_max_opt(mut self, q: Option<u32>) -> Self {
        self.q_max = q;
        self
    }
}

fn pleth_mono(
    lambda: &Partition,
    adams: &mut Vec<HLaurent>,
    g: &HLaurent,
    memo: &mut HashMap<Partition, HLaurent>,
) -> HLaurent {
    if let Some(v) = memo.get(lambda) {
        return v.clone();
    }
    let first = lambda.parts()[0];
    while adams.len() <= first as usize {
        let n = adams.len() as u32;
        adams.push(g.adams(n));
    }
    let rest = lambda.remove_one(first).unwrap();
    let tail = pleth_mono(&rest, adams, g, memo);
    let out = &adams[first as usize] * &tail;
    memo.insert(lambda.clone(), out.clone());
    out
}

/// `log(1 + u) = Σ_k (-1)^{k+1} u^k / k`; `u` must make the powers vanish eventually.
pub(crate) fn log1p(u: &HLaurent) -> HLaurent {
    let mut out = HLaurent::zero(u.trunc());
    let mut power = u.clone();
    let mut k = 1i64;
    while !power.is_zero() {
        let c = if k % 2 == 1 { recip(k) } else { -recip(k) };
        out = &out + &power.scale(&c);
        power = &power * u;
        k += 1;
    }
    out
}

/// `Exp` on plain symmetric functions without constant term, truncated at their weight.
pub fn sym_exp(f: &SymFunc) -> Result<SymFunc> {
    if !f.constant_term().is_zero() {
        return Err(Error::ConstantTerm);
    }
    let h = HLaurent::from_symfunc(f, 0).pleth_exp()?;
    Ok(h.hbar_coeff(0).truncate(f.max_weight()))
}
