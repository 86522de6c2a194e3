use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exactsym::{h, Partition, SymFunc};
use crate::rational::{euler_phi, mobius, rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedOperad {
    Com,
    Ass,
    Lie,
}

impl NamedOperad {
    pub const ALL: [NamedOperad; 3] = [NamedOperad::Com, NamedOperad::Ass, NamedOperad::Lie];

    pub fn name(self) -> &'static str {
        match self {
            NamedOperad::Com => "com",
            NamedOperad::Ass => "ass",
            NamedOperad::Lie => "lie",
        }
    }
}

impl fmt::Display for NamedOperad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedOperad {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "com" => Ok(NamedOperad::Com),
            "ass" => Ok(NamedOperad::Ass),
            "lie" => Ok(NamedOperad::Lie),
            other => Err(Error::Invalid(format!("unknown operad '{other}' (expected com, ass or lie)"))),
        }
    }
}

/// `-log(1 - p_n) = Σ_k p_n^k / k`, truncated at `w`.
fn neg_log_one_minus_p(n: u32, w: u32) -> SymFunc {
    SymFunc::from_terms(
        w,
        (1..=w / n).map(|k| (Partition::from_parts(vec![n; k as usize]), rat(1, k as i64))),
    )
}

/// Characteristic of a named cyclic operad, exact through `max_weight`.
pub fn named_char(which: NamedOperad, max_weight: u32) -> SymFunc {
    let w = max_weight;
    match which {
        NamedOperad::Com => (3..=w).fold(SymFunc::zero(w), |acc, n| acc + h(n, w)),
        NamedOperad::Ass => {
            let mut acc = SymFunc::zero(w);
            for n in 1..=w {
                acc = acc + neg_log_one_minus_p(n, w).scale(&rat(euler_phi(n) as i64, n as i64));
            }
            acc - h(1, w) - h(2, w)
        }
        NamedOperad::Lie => {
            let mut series = SymFunc::zero(w);
            for n in 1..=w {
                let mu = mobius(n);
                if mu != 0 {
                    series = series - neg_log_one_minus_p(n, w).scale(&rat(mu as i64, n as i64));
                }
            }
            let one_minus_p1 = SymFunc::one(w) - SymFunc::p(1, w);
            one_minus_p1 * series + h(1, w) - h(2, w)
        }
    }
}

/// `Σ_{d|n} φ(d)/n p_d^{n/d}`, the arity-`n` component of `Ass`.
#[cfg(test)]
fn ass_component(n: u32, w: u32) -> SymFunc {
    SymFunc::from_terms(
        w,
        crate::rational::divisors(n).into_iter().map(|d| {
            (Partition::from_parts(vec![d; (n / d) as usize]), rat(euler_phi(d) as i64, n as i64))
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactsym::{e, VirtualCharacter};
    use crate::rational::Rational;

    #[test]
    fn low_weights_vanish() {
        for op in NamedOperad::ALL {
            let c = named_char(op, 8);
            assert_eq!(c.min_weight(), Some(3), "{op}");
        }
    }

    #[test]
    fn com_is_trivial_rep() {
        let c = named_char(NamedOperad::Com, 6);
        for n in 3..=6 {
            assert_eq!(c.homogeneous(n), h(n, 6));
        }
    }

    #[test]
    fn ass_weight_three() {
        let c = named_char(NamedOperad::Ass, 3).homogeneous(3);
        let expected = SymFunc::from_terms(
            3,
            [(Partition::from_parts(vec![1, 1, 1]), rat(1, 3)), (Partition::single(3), rat(2, 3))],
        );
        assert_eq!(c, expected);
    }

    #[test]
    fn ass_matches_induced_from_cyclic_group() {
        let c = named_char(NamedOperad::Ass, 8);
        for n in 3..=8 {
            assert_eq!(c.homogeneous(n), ass_component(n, 8), "n = {n}");
            // Ind from Z_n of the trivial character, computed from class values.
            let ch = VirtualCharacter::from_fn(n, |lambda| {
                // χ(σ) = |C(σ)| · |class(σ) ∩ Z_n| / n; Z_n holds φ(d) elements of type d^{n/d}.
                let parts = lambda.parts();
                let d = parts[0];
                if parts.iter().all(|&p| p == d) {
                    let z = lambda.z();
                    let num = num_bigint::BigInt::from(euler_phi(d)) * z;
                    Rational::new(num, num_bigint::BigInt::from(n))
                } else {
                    Rational::from_integer(0.into())
                }
            });
            assert_eq!(ch.characteristic_at(8), ass_component(n, 8), "induced n = {n}");
        }
    }

    #[test]
    fn lie_weight_three_is_sign() {
        // Lie((3)) is the sign representation of S_3.
        let c = named_char(NamedOperad::Lie, 3).homogeneous(3);
        assert_eq!(c, e(3, 3));
    }

    #[test]
    fn lie_dimensions() {
        // dim Lie((n)) = dim Lie(n-1) = (n-2)!
        let c = named_char(NamedOperad::Lie, 8);
        let r = c.rank();
        for n in 3..=8u32 {
            let dim = r.coeff(n) * Rational::from_integer(crate::rational::factorial(n));
            assert_eq!(dim, Rational::from_integer(crate::rational::factorial(n - 2)), "n = {n}");
        }
    }

    #[test]
    fn parse_names() {
        assert_eq!("LIE".parse::<NamedOperad>().unwrap(), NamedOperad::Lie);
        assert!("foo".parse::<NamedOperad>().is_err());
    }
}
