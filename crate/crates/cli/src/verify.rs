//! Cross-route oracle suites behind `opchar verify`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use opchar::cyclic::{cobar_char, legendre, named_char, plethystic_inverse, NamedOperad, StarSymFunc};
use opchar::exactsym::{e, h, partitions_upto, SymFunc, VirtualCharacter};
use opchar::graphzoo::{burnside_char, canonicalize, enumerate, tree_sum, Twist};
use opchar::hlaurent::{free_modular_char, is_stable, HLaurent, Measure, StableCharTable, TruncationSpec};
use opchar::moduli::{
    all_integral, euler_chi_extract, f_det_ass_closed, f_det_ass_functional, f_det_ass_integral, formal_integral_1v,
    hbar_order, potential_from_coefficients, psi, psi_n, psi_with_cuts, stirling_check, ClosedForm, EulerSource,
    Route,
};
use opchar::rational::{int, Rational};

/// Seed shared by every randomized check, so reports are reproducible.
pub const SEED: u64 = 0x6f70_6368_6172;

#[derive(Clone, Debug)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(suite: &'static str, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { suite, name: name.into(), passed, detail: detail.into() }
    }

    pub fn to_json(&self) -> Value {
        json!({"suite": self.suite, "name": self.name, "passed": self.passed, "detail": self.detail})
    }
}

pub const SUITES: &[&str] =
    &["legendre", "cobar", "laplacian", "burnside", "micro", "graphs", "wick", "stirling", "psi", "fdet"];

/// Runs one named suite, or every suite for `"all"`.
pub fn run_suite(name: &str) -> Option<Vec<Check>> {
    let out = match name {
        "all" => SUITES.iter().flat_map(|s| run_suite(s).unwrap()).collect(),
        "legendre" => legendre_suite(),
        "cobar" => cobar_suite(),
        "laplacian" => laplacian_suite(),
        "burnside" => burnside_suite(),
        "micro" => micro_suite(),
        "graphs" => graphs_suite(),
        "wick" => wick_suite(),
        "stirling" => stirling_suite(),
        "psi" => psi_suite(),
        "fdet" => fdet_suite(),
        _ => return None,
    };
    Some(out)
}

fn outcome<T: std::fmt::Display>(r: opchar::Result<T>) -> (bool, String) {
    match r {
        Ok(v) => (true, v.to_string()),
        Err(e) => (false, e.to_string()),
    }
}

/// Random element of `Λ_*` through weight `w`: `a·h_2 + b·e_2` with `a + b ≠ 0`
/// plus sparse small integer multiples of `p_λ`, `3 ≤ |λ| ≤ w`.
pub fn random_star(rng: &mut ChaCha8Rng, w: u32) -> SymFunc {
    let a: i64 = rng.gen_range(1..=3);
    let b: i64 = rng.gen_range(-2..=2);
    let b = if a + b == 0 { b + 1 } else { b };
    let mut f = h(2, w).scale(&int(a)) + e(2, w).scale(&int(b));
    for lambda in partitions_upto(w).into_iter().filter(|p| p.weight() >= 3) {
        if rng.gen_bool(0.3) {
            let c: i64 = rng.gen_range(-2..=2);
            f = f + SymFunc::monomial(lambda, int(c), w);
        }
    }
    f
}

pub fn legendre_suite() -> Vec<Check> {
    const S: &str = "legendre";
    let w = 8;
    let mut out = Vec::new();
    let l_h2 = legendre(&StarSymFunc::new(h(2, w)).unwrap()).map(|g| g.into_symfunc());
    let l_e2 = legendre(&StarSymFunc::new(e(2, w)).unwrap()).map(|g| g.into_symfunc());
    out.push(Check::new(S, "L(h_2) = e_2", l_h2.as_ref().ok() == Some(&e(2, w)), format!("{l_h2:?}")));
    out.push(Check::new(S, "L(e_2) = h_2", l_e2.as_ref().ok() == Some(&h(2, w)), format!("{l_e2:?}")));
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut inv_ok, mut pair_ok, mut neg_ok) = (0, 0, 0);
    let mut failures = Vec::new();
    let trials = 20;
    for i in 0..trials {
        let f = random_star(&mut rng, w);
        let star = StarSymFunc::new(f.clone()).unwrap();
        let g = match legendre(&star) {
            Ok(g) => g,
            Err(err) => {
                failures.push(format!("input {i}: {err}; f = {f}"));
                continue;
            }
        };
        match legendre(&g) {
            Ok(back) if back.as_symfunc() == &f => inv_ok += 1,
            other => failures.push(format!("involution at input {i}: f = {f}, LLf = {other:?}")),
        }
        let fp = f.pderiv(1);
        let gp = g.as_symfunc().pderiv(1);
        let p1 = SymFunc::p(1, w - 1);
        let left = gp.plethysm(&fp).ok();
        let right = fp.plethysm(&gp).ok();
        if left.as_ref() == Some(&p1) && right.as_ref() == Some(&p1) && plethystic_inverse(&fp).ok().as_ref() == Some(&gp) {
            pair_ok += 1;
        } else {
            failures.push(format!("inverse pair at input {i}: f = {f}"));
        }
        let lhs = StarSymFunc::new(f.omega_tilde()).and_then(|x| legendre(&x)).map(|x| x.into_symfunc().scale(&int(-1)));
        let rhs = StarSymFunc::new(f.scale(&int(-1))).and_then(|x| legendre(&x)).map(|x| x.into_symfunc());
        if matches!((&lhs, &rhs), (Ok(a), Ok(b)) if a == b) {
            neg_ok += 1;
        } else {
            failures.push(format!("-L(w~f) = L(-f) at input {i}: f = {f}"));
        }
    }
    let detail = failures.join("; ");
    out.push(Check::new(S, format!("L(L(f)) = f on {trials} random inputs, weight {w}"), inv_ok == trials, detail.clone()));
    out.push(Check::new(
        S,
        format!("(Lf)' and f' are two-sided plethystic inverses on {trials} random inputs"),
        pair_ok == trials,
        detail.clone(),
    ));
    out.push(Check::new(S, format!("-L(w~ f) = L(-f) on {trials} random inputs"), neg_ok == trials, detail));
    out
}

pub fn cobar_suite() -> Vec<Check> {
    const S: &str = "cobar";
    let w = 8;
    let com = named_char(NamedOperad::Com, w);
    let lie = named_char(NamedOperad::Lie, w);
    let ass = named_char(NamedOperad::Ass, w);
    let b_com = cobar_char(&com, w);
    let b_lie = cobar_char(&lie, w);
    let bb_ass = cobar_char(&ass, w).and_then(|b| cobar_char(&b, w));
    vec![
        Check::new(S, "Ch(B Com) = Ch(Lie) through weight 8", b_com.as_ref().ok() == Some(&lie), outcome(b_com).1),
        Check::new(S, "Ch(B Lie) = Ch(Com) through weight 8", b_lie.as_ref().ok() == Some(&com), outcome(b_lie).1),
        Check::new(S, "Ch(BB Ass) = Ch(Ass) through weight 8", bb_ass.as_ref().ok() == Some(&ass), outcome(bb_ass).1),
    ]
}

/// `exp(Δ) p_λ` against `D(Exp(ħh_2)) p_λ` for every `|λ| ≤ w`.
pub fn laplacian_check(w: u32) -> (bool, String) {
    let big = 2 * w as i64;
    let hbar_h2 = HLaurent::from_symfunc(&h(2, 2), 2).assume_exact_to(big);
    let exp = match hbar_h2.pleth_exp() {
        Ok(x) => x,
        Err(err) => return (false, err.to_string()),
    };
    for lambda in partitions_upto(w) {
        let mono = HLaurent::hp(0, lambda.parts(), int(1), big);
        let a = mono.laplacian(opchar::hlaurent::Sign::Plus, true);
        let b = exp.adjoint_apply(&mono);
        if !a.agrees_with(&b) {
            return (false, format!("p{lambda}: {:?}", a.first_difference(&b)));
        }
    }
    (true, format!("{} monomials", partitions_upto(w).len()))
}

pub fn laplacian_suite() -> Vec<Check> {
    let (ok, detail) = laplacian_check(6);
    vec![Check::new("laplacian", "exp(Delta) = D(Exp(hbar h_2)) on p-monomials of weight <= 6", ok, detail)]
}

pub fn table_a() -> StableCharTable {
    StableCharTable::trivial_at(&[(0, 3), (1, 1)]).unwrap()
}

pub fn table_b() -> StableCharTable {
    StableCharTable::new()
        .with(0, 3, VirtualCharacter::sign(3).scale(&int(2)))
        .unwrap()
        .with(0, 4, VirtualCharacter::regular(4).add(&VirtualCharacter::trivial(4)).unwrap())
        .unwrap()
        .with(1, 1, VirtualCharacter::trivial(1).scale(&int(-3)))
        .unwrap()
        .with(1, 2, VirtualCharacter::sign(2))
        .unwrap()
        .with(2, 1, VirtualCharacter::trivial(1))
        .unwrap()
}

/// Burnside graph sums against the `(g, n)` coefficients of `CCh(MV)`.
pub fn burnside_check(table: &StableCharTable, points: &[(u32, u32)]) -> (bool, String) {
    let w = points.iter().map(|&(g, n)| 2 * g as i64 - 2 + n as i64).max().unwrap_or(1);
    let full = match free_modular_char(table, &TruncationSpec::weight(w)) {
        Ok(f) => f,
        Err(err) => return (false, err.to_string()),
    };
    for &(g, n) in points {
        let expected = full.hbar_coeff(2 * (g as i32 - 1)).homogeneous(n).truncate(n);
        match burnside_char(g, n, table, Twist::Trivial) {
            Ok(got) if got == expected => {}
            Ok(got) => return (false, format!("({g},{n}): graph sum {got} vs {expected}")),
            Err(err) => return (false, format!("({g},{n}): {err}")),
        }
    }
    (true, format!("{} points", points.len()))
}

pub const BURNSIDE_POINTS: [(u32, u32); 6] = [(0, 3), (0, 4), (0, 5), (1, 1), (1, 2), (2, 1)];

pub fn burnside_suite() -> Vec<Check> {
    let mut out = Vec::new();
    for (label, t) in [("A", table_a()), ("B", table_b())] {
        let (ok, detail) = burnside_check(&t, &BURNSIDE_POINTS);
        out.push(Check::new("burnside", format!("burnside_char = CCh(MV) coefficient, table {label}"), ok, detail));
    }
    out
}

/// `CCh(MV)` for `V` trivial at `(1, 1)`, through weight `w`.
pub fn micro_instance(w: i64) -> opchar::Result<HLaurent> {
    free_modular_char(&StableCharTable::trivial_at(&[(1, 1)])?, &TruncationSpec::weight(w))
}

pub fn micro_suite() -> Vec<Check> {
    const S: &str = "micro";
    let mut out = Vec::new();
    for w in 2..=6 {
        let got = micro_instance(w);
        let want = &HLaurent::hp(0, &[1], int(1), w) + &HLaurent::hp(2, &[], int(1), w);
        let ok = got.as_ref().is_ok_and(|g| g.terms() == want.terms());
        out.push(Check::new(S, format!("CCh(MV) = p_1 + hbar at weight {w}"), ok, format!("{got:?}")));
    }
    let t = StableCharTable::trivial_at(&[(1, 1)]).unwrap();
    let (ok, detail) = burnside_check(&t, &[(1, 1), (2, 0), (2, 1), (3, 0)]);
    out.push(Check::new(S, "micro-instance formula = graph enumeration", ok, detail));
    out
}

pub fn graphs_suite() -> Vec<Check> {
    const S: &str = "graphs";
    let mut out = Vec::new();
    let counts = |g, n, labelled| enumerate(g, n, labelled).map(|c| c.iter().map(|x| x.aut_order()).collect::<Vec<_>>());
    let c11 = counts(1, 1, false);
    out.push(Check::new(
        S,
        "(1,1): two classes with |Aut| in {1,2}",
        c11.as_ref().is_ok_and(|v| {
            let mut v = v.clone();
            v.sort();
            v == [1, 2]
        }),
        format!("{c11:?}"),
    ));
    let c20 = counts(2, 0, false);
    out.push(Check::new(
        S,
        "(2,0): seven classes with |Aut| 1,2,2,2,8,8,12",
        c20.as_ref().is_ok_and(|v| {
            let mut v = v.clone();
            v.sort();
            v == [1, 2, 2, 2, 8, 8, 12]
        }),
        format!("{c20:?}"),
    ));
    let a: BTreeMap<u32, Rational> = [(3, int(1))].into();
    let trees = tree_sum(6, &a);
    out.push(Check::new(S, "105 trivalent trees with 6 labelled legs", trees == Ok(int(105)), format!("{trees:?}")));
    // relabelling invariance of the canonical key
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut ok = true;
    let mut detail = String::new();
    for (g, n) in [(2, 1), (1, 3), (0, 5)] {
        for class in enumerate(g, n, true).unwrap_or_default() {
            let shuffled = shuffle_graph(&class.graph, &mut rng);
            let key = canonicalize(&shuffled).key().to_vec();
            if key != class.canon.key() {
                ok = false;
                detail = format!("({g},{n}) key changed under relabelling");
            }
        }
    }
    out.push(Check::new(S, "canonical key invariant under flag and vertex relabelling", ok, detail));
    out
}

/// Random relabelling of flags and vertices.
pub fn shuffle_graph(g: &opchar::graphzoo::StableGraph, rng: &mut ChaCha8Rng) -> opchar::graphzoo::StableGraph {
    use rand::seq::SliceRandom;
    let raw = g.to_raw();
    let f = raw.involution.len();
    let v = raw.genus.len();
    let mut fp: Vec<usize> = (0..f).collect();
    fp.shuffle(rng);
    let mut vp: Vec<usize> = (0..v).collect();
    vp.shuffle(rng);
    let mut involution = vec![0; f];
    let mut vertex_of = vec![0; f];
    for x in 0..f {
        involution[fp[x]] = fp[raw.involution[x]];
        vertex_of[fp[x]] = vp[raw.vertex_of[x]];
    }
    let mut genus = vec![0; v];
    for (x, &gx) in raw.genus.iter().enumerate() {
        genus[vp[x]] = gx;
    }
    let legs = raw.legs.map(|m| m.into_iter().map(|(k, l)| (fp[k], l)).collect());
    opchar::graphzoo::StableGraph::build_validate(opchar::graphzoo::RawGraph { involution, vertex_of, genus, legs })
        .expect("relabelling preserves validity")
}

/// Moments route against graph-sum route on `trials` random potentials with
/// `f_{g,n} ∈ {-3..3}` for all `2(g-1)+n ≤ 5`.
pub fn one_variable_wick_check(trials: usize) -> (bool, String) {
    let w_out = 5i64;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x77);
    for t in 0..trials {
        let mut coeffs = BTreeMap::new();
        for g in 0..=3u32 {
            for n in 0..=7u32 {
                let chi = 2 * g as i64 - 2 + n as i64;
                if is_stable(g, n) && chi <= w_out {
                    coeffs.insert((g, n), int(rng.gen_range(-3..=3)));
                }
            }
        }
        let f = potential_from_coefficients(&coeffs, w_out + 2);
        let a = formal_integral_1v(&f, Route::Moments);
        let b = formal_integral_1v(&f, Route::Wick);
        match (a, b) {
            (Ok(a), Ok(b)) if a == b => {}
            (a, b) => return (false, format!("trial {t}: coefficients {coeffs:?}: moments {a:?} vs wick {b:?}")),
        }
    }
    (true, format!("{trials} random potentials"))
}

pub fn wick_suite() -> Vec<Check> {
    let (ok, detail) = one_variable_wick_check(3);
    let mut out = vec![Check::new("wick", "one-variable moments route = graph-sum route, 2(g-1)+n <= 5", ok, detail)];
    let t = StableCharTable::from_dims(&[((0, 3), int(2)), ((1, 1), int(-1)), ((0, 4), int(3))].into()).unwrap();
    let (ok, detail) = burnside_check(&t, &[(0, 3), (0, 4), (0, 5), (1, 1), (1, 2), (2, 0)]);
    out.push(Check::new("wick", "character oracle agrees on a dimension table", ok, detail));
    out
}

pub fn stirling_suite() -> Vec<Check> {
    let r = stirling_check(10);
    let (ok, detail) = match &r {
        Ok((l, r)) if l == r => (true, format!("{} terms", l.len())),
        Ok((l, r)) => (false, format!("left {l} right {r}")),
        Err(err) => (false, err.to_string()),
    };
    vec![Check::new("stirling", "Stirling identity through hbar^10", ok, detail)]
}

pub const PSI_EXPECTED: [i64; 8] = [2, 2, 4, 2, 6, 6, 6, 1];

pub fn psi_suite() -> Vec<Check> {
    const S: &str = "psi";
    let p = psi(8);
    let got: Vec<Rational> = (1..=8).map(|k| p.hbar_coeff(k)).collect();
    let want: Vec<Rational> = PSI_EXPECTED.iter().map(|&x| int(x)).collect();
    let mut out = vec![Check::new(S, "Psi through hbar^8 = 2,2,4,2,6,6,6,1", got == want, format!("{got:?}"))];
    let stable = psi_with_cuts(8, 49, 9) == p;
    out.push(Check::new(S, "cut stability (n <= 6N+1, l <= N+1)", stable, String::new()));
    let mut bad = Vec::new();
    for n in 1..=36u32 {
        let s = psi_n(n, 8);
        if let Some(ord) = hbar_order(&s) {
            if ord < Rational::from_integer(n.div_ceil(6).into()) {
                bad.push(n);
            }
        }
    }
    out.push(Check::new(S, "ord Psi_n >= ceil(n/6) for n <= 36", bad.is_empty(), format!("{bad:?}")));
    let chis = euler_chi_extract(EulerSource::Psi(&p));
    out.push(Check::new(S, "Euler characteristic sums are integers", all_integral(&chis), format!("{chis:?}")));
    out
}

/// Closed form, separated integrals and functional integral through weight `w`.
pub fn fdet_check(w: i64) -> (bool, String) {
    let closed = f_det_ass_closed(w, ClosedForm::Standard);
    let integral = match f_det_ass_integral(w) {
        Ok(x) => x,
        Err(err) => return (false, format!("integral route: {err}")),
    };
    let functional = match f_det_ass_functional(w, Measure::MuReflected) {
        Ok(x) => x,
        Err(err) => return (false, format!("functional route: {err}")),
    };
    if !integral.agrees_with(&closed) {
        return (false, format!("integral vs closed: {:?}", integral.first_difference(&closed)));
    }
    if !functional.agrees_with(&closed) {
        return (false, format!("functional vs closed: {:?}", functional.first_difference(&closed)));
    }
    (true, format!("{} terms", closed.len()))
}

pub fn fdet_suite() -> Vec<Check> {
    const S: &str = "fdet";
    let (ok, detail) = fdet_check(6);
    let mut out = vec![Check::new(S, "CCh(F_Det Ass): closed = separated integrals = functional integral, weight 6", ok, detail)];
    let closed = f_det_ass_closed(6, ClosedForm::Standard);
    let ass = named_char(NamedOperad::Ass, 8).omega_tilde().scale(&int(-1));
    out.push(Check::new(
        S,
        "hbar^-1 part of CCh(F_Det Ass) = -w~ Ch(Ass)",
        closed.hbar_coeff(-2) == HLaurent::from_symfunc(&ass, -2).hbar_coeff(-2),
        String::new(),
    ));
    let chis = euler_chi_extract(EulerSource::FDetAss(&closed));
    out.push(Check::new(S, "e(M_1,1) + e(M_0,3) = 2", chis.get(&-1) == Some(&int(2)), format!("{chis:?}")));
    out
}
