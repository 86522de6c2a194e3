use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactsym::{h, Partition, SymFunc};
use crate::rational::Rational;

/// An element of `Λ_*`: no terms below weight 2, and `rk(f) = a_2 x²/2 + …` with `a_2 ≠ 0`.
///
/// The weight-2 part is kept as `a·h_2 + b·e_2`, so `a_2 = a + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarSymFunc {
    f: SymFunc,
    h2: Rational,
    e2: Rational,
}

impl StarSymFunc {
    pub fn new(f: SymFunc) -> Result<Self> {
        if f.max_weight() < 2 {
            return Err(Error::NotStar(format!("truncation {} is below weight 2", f.max_weight())));
        }
        if let Some(w) = f.min_weight().filter(|&w| w < 2) {
            return Err(Error::NotStar(format!("term of weight {w}")));
        }
        let a2 = f.rank().coeff(2) * Rational::from_integer(2.into());
        if a2.is_zero() {
            return Err(Error::NotStar("coefficient of x^2/2 in rk(f) vanishes".into()));
        }
        let sq = f.coeff(&Partition::from_parts(vec![1, 1]));
        let p2 = f.coeff(&Partition::single(2));
        Ok(StarSymFunc { h2: &sq + &p2, e2: sq - p2, f })
    }

    pub fn as_symfunc(&self) -> &SymFunc {
        &self.f
    }

    pub fn into_symfunc(self) -> SymFunc {
        self.f
    }

    /// `(a, b)` with weight-2 part `a·h_2 + b·e_2`.
    pub fn weight_two(&self) -> (&Rational, &Rational) {
        (&self.h2, &self.e2)
    }

    pub fn max_weight(&self) -> u32 {
        self.f.max_weight()
    }
}

/// Two-sided plethystic inverse of `u = c·p_1 + …` with `c ≠ 0`, solved weight by weight.
pub fn plethystic_inverse(u: &SymFunc) -> Result<SymFunc> {
    if !u.constant_term().is_zero() {
        return Err(Error::ConstantTerm);
    }
    let w = u.max_weight();
    let c = u.coeff(&Partition::single(1));
    if c.is_zero() {
        return Err(Error::NoLeadingUnit("coefficient of p_1 is zero".into()));
    }
    let mut v = SymFunc::p(1, w).scale(&(Rational::one() / &c));
    for d in 2..=w {
        // (v + v_d)∘u = p_1 at weight d, where v_d∘u contributes v_d(p_n ↦ c p_n).
        let defect = v.plethysm(u)?.homogeneous(d);
        if defect.is_zero() {
            continue;
        }
        let correction = defect.map_coeffs(|k, x| -x / num_traits::pow(c.clone(), k.len()));
        v = v + correction;
    }
    Ok(v)
}

/// Plethystic Legendre transform: the unique `g` with `g∘∂f/∂p_1 + f = p_1·∂f/∂p_1`.
///
/// Exact through the input truncation.
pub fn legendre(f: &StarSymFunc) -> Result<StarSymFunc> {
    let w = f.max_weight();
    let fp = f.f.pderiv(1);
    let inv = plethystic_inverse(&fp)?;
    // p_1·f' is exact to weight w; the degree-w part of inv is never reached because
    // the outer function starts at weight 2.
    let outer = (SymFunc::p(1, w) * fp.assume_exact_to(w)) - f.f.clone();
    let g = outer.plethysm(&inv.assume_exact_to(w))?;
    StarSymFunc::new(g)
}

/// `Ch(Bα) = L(ω̃(h_2 + a)) - h_2` for the characteristic `a` of a cyclic operad with
/// nothing in arity `≤ 2`.
pub fn cobar_char(a: &SymFunc, max_weight: u32) -> Result<SymFunc> {
    if let Some(w) = a.min_weight().filter(|&w| w <= 2) {
        return Err(Error::Invalid(format!("cyclic characteristic has a term of weight {w}")));
    }
    if a.max_weight() < max_weight {
        return Err(Error::TruncationMismatch(max_weight as i64, a.max_weight() as i64));
    }
    let w = max_weight;
    let f = StarSymFunc::new((h(2, w) + a.truncate(w)).omega_tilde())?;
    Ok(legendre(&f)?.into_symfunc() - h(2, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::{named_char, NamedOperad};
    use crate::exactsym::e;
    use crate::rational::{int, rat};

    fn star(f: SymFunc) -> StarSymFunc {
        StarSymFunc::new(f).unwrap()
    }

    #[test]
    fn h2_e2_swap() {
        for w in 2..=7 {
            assert_eq!(legendre(&star(h(2, w))).unwrap().into_symfunc(), e(2, w));
            assert_eq!(legendre(&star(e(2, w))).unwrap().into_symfunc(), h(2, w));
        }
    }

    #[test]
    fn star_rejections() {
        assert!(StarSymFunc::new(SymFunc::p(1, 4)).is_err());
        // h_2 - e_2 = p_2 has rank zero.
        assert!(StarSymFunc::new(SymFunc::p(2, 4)).is_err());
        assert!(StarSymFunc::new(SymFunc::p_lambda(&[3], 4)).is_err());
        let s = star(h(2, 4).scale(&int(3)) + e(2, 4));
        assert_eq!(s.weight_two(), (&int(3), &int(1)));
    }

    #[test]
    fn inverse_examples() {
        let p1 = SymFunc::p(1, 6);
        assert_eq!(plethystic_inverse(&p1).unwrap(), p1);
        let twice = p1.scale(&int(2));
        assert_eq!(plethystic_inverse(&twice).unwrap(), p1.scale(&rat(1, 2)));
        let u = &p1 - &h(2, 6);
        let v = plethystic_inverse(&u).unwrap();
        assert_eq!(v.plethysm(&u).unwrap(), p1);
        assert_eq!(u.plethysm(&v).unwrap(), p1);
        assert!(matches!(plethystic_inverse(&SymFunc::p(2, 6)), Err(Error::NoLeadingUnit(_))));
        assert!(plethystic_inverse(&(SymFunc::one(6) + p1)).is_err());
    }

    #[test]
    fn cobar_of_com_is_lie() {
        let w = 8;
        let lie = cobar_char(&named_char(NamedOperad::Com, w), w).unwrap();
        assert_eq!(lie, named_char(NamedOperad::Lie, w));
    }

    #[test]
    fn cobar_is_involutive_on_ass() {
        let w = 7;
        let ass = named_char(NamedOperad::Ass, w);
        let b = cobar_char(&ass, w).unwrap();
        assert_eq!(cobar_char(&b, w).unwrap(), ass);
    }

    #[test]
    fn cobar_rejects_low_weights() {
        assert!(cobar_char(&h(2, 5), 5).is_err());
    }

    #[test]
    fn omega_tilde_of_com_plus_h2() {
        let f = (h(2, 6) + named_char(NamedOperad::Com, 6)).omega_tilde();
        assert_eq!(f.homogeneous(2), e(2, 6));
    }

    #[test]
    fn rank_commutes() {
        let w = 7;
        let f = star(h(2, w).scale(&int(2)) - e(2, w) + named_char(NamedOperad::Ass, w).scale(&rat(-1, 3)));
        let g = legendre(&f).unwrap();
        assert_eq!(g.as_symfunc().rank(), f.as_symfunc().rank().legendre().unwrap());
    }
}
