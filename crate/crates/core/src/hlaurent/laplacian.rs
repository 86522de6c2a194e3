use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;

use super::series::{acc, recip, HLaurent, HMono};
use crate::rational::{int, Rational};

/// Sign of the Laplacian in [`HLaurent::laplacian`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn value(self) -> Rational {
        match self {
            Sign::Plus => int(1),
            Sign::Minus => int(-1),
        }
    }
}

impl HLaurent {
    /// `Δ = Σ_n ħ^n (n/2 ∂²/∂p_n² + ∂/∂p_{2n})`. Weight-preserving; lowers `|p|` by at least 2.
    pub fn delta(&self) -> HLaurent {
        let mut map = HashMap::new();
        for (k, c) in self.iter() {
            for (n, m) in k.p.multiplicities() {
                // n/2 · m(m-1) p_n^{m-2}
                if m >= 2 {
                    let p = k.p.remove_one(n).unwrap().remove_one(n).unwrap();
                    let coef = c * int(n as i64) * int((m * (m - 1)) as i64) * recip(2);
                    acc(&mut map, HMono::new(k.h2 + 2 * n as i32, p, k.q.clone()), coef);
                }
                // ħ^{n/2} ∂/∂p_n for even n
                if n % 2 == 0 {
                    let p = k.p.remove_one(n).unwrap();
                    acc(&mut map, HMono::new(k.h2 + n as i32, p, k.q.clone()), c * int(m as i64));
                }
            }
        }
        HLaurent::from_map(self.trunc(), map)
    }

    /// `±Δ f`, or `exp(±Δ) f` when `exponentiate` is set. The exponential is a
    /// finite sum because each application of `Δ` lowers `|p|` by at least 2.
    pub fn laplacian(&self, sign: Sign, exponentiate: bool) -> HLaurent {
        let s = sign.value();
        if !exponentiate {
            return self.delta().scale(&s);
        }
        let mut out = self.clone();
        let mut term = self.clone();
        let mut k = 1i64;
        loop {
            term = term.delta().scale(&(&s * recip(k)));
            if term.is_zero() {
                break;
            }
            out = &out + &term;
            k += 1;
        }
        out
    }

    /// `D(f)g`: each `p_n` in `self` acts as `n ∂/∂p_n` (ħ and `q` as scalars).
    ///
    /// `self` is treated as a polynomial. A term `ħ^{a} p_λ` changes weight by
    /// `2a - |λ|`, so the output bound is `W_g + min(2a - |λ|)`.
    pub fn adjoint_apply(&self, g: &HLaurent) -> HLaurent {
        let shift = self.iter().map(|(k, _)| k.h2 as i64 - k.p.weight() as i64).min().unwrap_or(0);
        let mut t = g.trunc();
        t.max_weight += shift;
        let mut map = HashMap::new();
        for (f, cf) in self.iter() {
            for (m, cg) in g.iter() {
                let mut rest = m.p.clone();
                let mut factor = BigInt::one();
                let mut ok = true;
                for (part, mult) in f.p.multiplicities() {
                    let have = rest.count(part);
                    if have < mult {
                        ok = false;
                        break;
                    }
                    for i in 0..mult {
                        factor *= BigInt::from(part) * BigInt::from(have - i);
                        rest = rest.remove_one(part).unwrap();
                    }
                }
                if ok {
                    let key = HMono::new(f.h2 + m.h2, rest, f.q.merge(&m.q));
                    acc(&mut map, key, cf * cg * Rational::from_integer(factor));
                }
            }
        }
        HLaurent::from_map(t, map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_examples() {
        let w = 6;
        let hbar = HLaurent::hp(2, &[], int(1), w);
        assert_eq!(HLaurent::hp(0, &[1, 1], int(1), w).delta().terms(), hbar.terms());
        assert_eq!(HLaurent::hp(0, &[2], int(1), w).delta().terms(), hbar.terms());
        let e = HLaurent::hp(0, &[1, 1], int(1), w).laplacian(Sign::Plus, true);
        assert_eq!(e.terms(), (&HLaurent::hp(0, &[1, 1], int(1), w) + &hbar).terms());
    }

    #[test]
    fn exp_delta_inverse_pair() {
        let w = 8;
        let f = &HLaurent::hp(0, &[2, 2, 1, 1], int(3), w) + &HLaurent::hp(-2, &[4, 2, 1, 1], int(-2), w);
        let g = f.laplacian(Sign::Plus, true).laplacian(Sign::Minus, true);
        assert_eq!(g.terms(), f.terms());
    }
}
