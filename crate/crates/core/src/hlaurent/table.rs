use std::collections::BTreeMap;

use super::laplacian::Sign;
use super::series::{HLaurent, TruncationSpec};
use crate::error::{Error, Result};
use crate::exactsym::VirtualCharacter;
use crate::rational::Rational;

/// Stable 𝕊-module at character level: `(g, n) ↦` virtual character of `S_n`,
/// nonzero only where `2(g-1) + n > 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StableCharTable {
    entries: BTreeMap<(u32, u32), VirtualCharacter>,
}

pub fn is_stable(g: u32, n: u32) -> bool {
    2 * g as i64 - 2 + n as i64 > 0
}

impl StableCharTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, g: u32, n: u32, chi: VirtualCharacter) -> Result<()> {
        if !is_stable(g, n) {
            return Err(Error::Unstable(g, n));
        }
        if chi.n() != n {
            return Err(Error::Invalid(format!("character of S_{} stored at ({}, {})", chi.n(), g, n)));
        }
        self.entries.insert((g, n), chi);
        Ok(())
    }

    pub fn with(mut self, g: u32, n: u32, chi: VirtualCharacter) -> Result<Self> {
        self.insert(g, n, chi)?;
        Ok(self)
    }

    /// Trivial representation at every listed `(g, n)`.
    pub fn trivial_at(points: &[(u32, u32)]) -> Result<Self> {
        let mut t = Self::new();
        for &(g, n) in points {
            t.insert(g, n, VirtualCharacter::trivial(n))?;
        }
        Ok(t)
    }

    /// `a_{g,n}·(trivial)`: a module whose rank-level data is the given dimensions.
    pub fn from_dims(dims: &BTreeMap<(u32, u32), Rational>) -> Result<Self> {
        let mut t = Self::new();
        for (&(g, n), d) in dims {
            t.insert(g, n, VirtualCharacter::trivial(n).scale(d))?;
        }
        Ok(t)
    }

    pub fn entries(&self) -> &BTreeMap<(u32, u32), VirtualCharacter> {
        &self.entries
    }

    pub fn get(&self, g: u32, n: u32) -> Option<&VirtualCharacter> {
        self.entries.get(&(g, n))
    }

    pub fn has_genus_zero(&self) -> bool {
        self.entries.keys().any(|&(g, _)| g == 0)
    }

    /// Dimension table `(g, n) ↦ dim V((g, n))`.
    pub fn dims(&self) -> BTreeMap<(u32, u32), Rational> {
        self.entries.iter().map(|(k, v)| (*k, v.dim())).collect()
    }
}

/// `CCh(V) = Σ ħ^{g-1} ch_n(V((g,n)))`, exact through weight `max_weight`.
pub fn cch(table: &StableCharTable, max_weight: i64) -> HLaurent {
    let mut out = HLaurent::zero(TruncationSpec::weight(max_weight).with_hexp_min_x2(-2));
    for (&(g, n), chi) in table.entries() {
        let w = 2 * (g as i64 - 1) + n as i64;
        if w > max_weight {
            continue;
        }
        let f = chi.characteristic();
        let term = HLaurent::from_symfunc(&f, 2 * (g as i32 - 1)).assume_exact_to(max_weight);
        out = &out + &term;
    }
    out
}

fn check_window(table: &StableCharTable, trunc: &TruncationSpec) -> Result<()> {
    if table.has_genus_zero() && trunc.hexp_min_x2 > -2 {
        return Err(Error::Window(format!(
            "hexp_min {}/2 cannot hold the hbar^-1 layer of CCh",
            trunc.hexp_min_x2
        )));
    }
    Ok(())
}

fn transform(table: &StableCharTable, trunc: &TruncationSpec, sign: Sign) -> Result<HLaurent> {
    let spec = TruncationSpec { hexp_min_x2: trunc.hexp_min_x2.min(-2), ..*trunc };
    check_window(table, &spec)?;
    let c = cch(table, trunc.max_weight);
    let e = c.pleth_exp()?;
    e.laplacian(sign, true).pleth_log()
}

/// `CCh(MV) = Log(exp(Δ) Exp(CCh V))`: the free modular operad on `V`.
///
/// `trunc.max_weight` bounds the output; the default window `hexp_min_x2 = 0` is
/// widened to `-2` automatically. An explicit window above `-2` with genus-zero
/// input is rejected.
pub fn free_modular_char(table: &StableCharTable, trunc: &TruncationSpec) -> Result<HLaurent> {
    if trunc.hexp_min_x2 > -2 && trunc.hexp_min_x2 != 0 {
        check_window(table, trunc)?;
    }
    transform(table, trunc, Sign::Plus)
}

/// `Log(exp(-Δ) Exp(CCh V))`: the Feynman transform at characteristic level.
pub fn feynman_char(table: &StableCharTable, trunc: &TruncationSpec) -> Result<HLaurent> {
    if trunc.hexp_min_x2 > -2 && trunc.hexp_min_x2 != 0 {
        check_window(table, trunc)?;
    }
    transform(table, trunc, Sign::Minus)
}

/// `Log(exp(±Δ) Exp(f))` for an arbitrary `f ∈ F¹`.
pub fn graph_sum(f: &HLaurent, sign: Sign) -> Result<HLaurent> {
    f.pleth_exp()?.laplacian(sign, true).pleth_log()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactsym::h;
    use crate::rational::int;

    #[test]
    fn cch_examples() {
        let t = StableCharTable::trivial_at(&[(0, 3)]).unwrap();
        let c = cch(&t, 5);
        assert_eq!(c.hbar_coeff(-2), h(3, 7));
        let t = StableCharTable::trivial_at(&[(1, 1)]).unwrap();
        assert_eq!(cch(&t, 5).terms(), HLaurent::hp(0, &[1], int(1), 5).terms());
        assert!(StableCharTable::trivial_at(&[(0, 2)]).is_err());
    }

    #[test]
    fn micro_instance() {
        // Exp(p_1) is an eigenvector of exp(Δ) with eigenvalue exp(Σ ħ^n / n), so the
        // result is exactly p_1 + ħ: the two-vertex graph contributes its one-dimensional
        // coinvariants.
        let t = StableCharTable::trivial_at(&[(1, 1)]).unwrap();
        for w in 2..=6 {
            let r = free_modular_char(&t, &TruncationSpec::weight(w)).unwrap();
            let expected = &HLaurent::hp(0, &[1], int(1), w) + &HLaurent::hp(2, &[], int(1), w);
            assert_eq!(r.terms(), expected.terms(), "weight {}", w);
        }
    }

    #[test]
    fn empty_table() {
        let r = free_modular_char(&StableCharTable::new(), &TruncationSpec::weight(4)).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn tight_window_rejected() {
        let t = StableCharTable::trivial_at(&[(0, 3)]).unwrap();
        let spec = TruncationSpec::weight(4).with_hexp_min_x2(-1);
        assert!(free_modular_char(&t, &spec).is_err());
    }
}
