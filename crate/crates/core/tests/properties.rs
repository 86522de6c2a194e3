use std::collections::BTreeMap;

use num_traits::Zero;
use proptest::prelude::*;

use opchar::cyclic::{legendre, StarSymFunc};
use opchar::exactsym::{e, h, partitions_of, partitions_upto, Partition, SymFunc, VirtualCharacter};
use opchar::graphzoo::{brute_force_aut_count, burnside_char, canonicalize, enumerate, RawGraph, StableGraph, Twist};
use opchar::hlaurent::{graph_sum, HLaurent, HMono, Sign, StableCharTable, TruncationSpec};
use opchar::json;
use opchar::rational::{int, Rational};

/// Per-test case count; `PROPTEST_CASES` overrides it.
fn cfg(cases: u32) -> ProptestConfig {
    let cases = std::env::var("PROPTEST_CASES").ok().and_then(|c| c.parse().ok()).unwrap_or(cases);
    ProptestConfig { cases, ..ProptestConfig::default() }
}

/// Sparse integer combination of `p_λ` with `min_w ≤ |λ| ≤ w`.
fn symfunc(min_w: u32, w: u32, max_terms: usize) -> impl Strategy<Value = SymFunc> {
    let basis: Vec<Partition> = partitions_upto(w).into_iter().filter(|p| p.weight() >= min_w).collect();
    let n = basis.len();
    prop::collection::vec((0..n, -3i64..=3), 0..=max_terms)
        .prop_map(move |ts| SymFunc::from_terms(w, ts.into_iter().map(|(i, c)| (basis[i].clone(), int(c)))))
}

/// `a·h_2 + b·e_2 + (terms of weight ≥ 3)`, filtered to `Λ_*`.
fn star(w: u32) -> impl Strategy<Value = StarSymFunc> {
    (-3i64..=3, -3i64..=3, symfunc(3, w, 6)).prop_filter_map("not in Lambda_*", move |(a, b, rest)| {
        let f = h(2, w).scale(&int(a)) + e(2, w).scale(&int(b)) + rest;
        StarSymFunc::new(f).ok()
    })
}

/// Sparse `Σ c ħ^a p_λ` with `a ∈ {0,1,2}` and weight `2a + |λ|` in `[1, w]`.
fn hlaurent(w: i64) -> impl Strategy<Value = HLaurent> {
    let mut basis = Vec::new();
    for a in 0..=2i32 {
        for p in partitions_upto(w as u32) {
            let wt = 2 * a as i64 + p.weight() as i64;
            if (1..=w).contains(&wt) {
                basis.push(HMono::new(2 * a, p, Partition::empty()));
            }
        }
    }
    let n = basis.len();
    prop::collection::vec((0..n, -2i64..=2), 0..=5).prop_map(move |ts| {
        HLaurent::from_terms(TruncationSpec::weight(w), ts.into_iter().map(|(i, c)| (basis[i].clone(), int(c))))
    })
}

fn omega_tilde_by_evaluation(f: &SymFunc) -> SymFunc {
    f.map_coeffs(|p, c| if p.len() % 2 == 0 { c.clone() } else { -c.clone() })
}

proptest! {
    #![proptest_config(cfg(48))]

    #[test]
    fn plethysm_is_associative(f in symfunc(0, 6, 4), g in symfunc(1, 6, 3), k in symfunc(1, 6, 3)) {
        let left = f.plethysm(&g).unwrap().plethysm(&k).unwrap();
        let right = f.plethysm(&g.plethysm(&k).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn p1_is_a_two_sided_unit(f in symfunc(0, 7, 6)) {
        let p1 = SymFunc::p(1, 7);
        prop_assert_eq!(f.plethysm(&p1).unwrap(), f.clone());
        let g = f.truncate(7);
        if g.constant_term().is_zero() {
            prop_assert_eq!(p1.plethysm(&g).unwrap(), g);
        }
    }

    #[test]
    fn plethysm_is_additive_and_multiplicative(a in symfunc(0, 6, 4), b in symfunc(0, 6, 4), g in symfunc(1, 6, 4)) {
        let sum = a.checked_add(&b).unwrap().plethysm(&g).unwrap();
        prop_assert_eq!(sum, a.plethysm(&g).unwrap().checked_add(&b.plethysm(&g).unwrap()).unwrap());
        let prod = a.checked_mul(&b).unwrap().plethysm(&g).unwrap();
        prop_assert_eq!(prod, a.plethysm(&g).unwrap().checked_mul(&b.plethysm(&g).unwrap()).unwrap());
    }

    #[test]
    fn chain_rule(u in symfunc(0, 6, 5), v in symfunc(1, 6, 4)) {
        let left = u.plethysm(&v).unwrap().pderiv(1);
        let right = u.pderiv(1).plethysm(&v).unwrap().checked_mul(&v.pderiv(1)).unwrap();
        prop_assert_eq!(left.truncate(5), right.truncate(5));
    }

    #[test]
    fn multiplication_is_adjoint_to_differentiation(f in symfunc(0, 3, 2), u in symfunc(0, 3, 4), v in symfunc(0, 6, 4)) {
        // D(f)v is certified up to weight 6 - 3, which covers u.
        let (f, u) = (f.assume_exact_to(6), u.assume_exact_to(6));
        let fu = f.checked_mul(&u).unwrap();
        prop_assert_eq!(fu.inner_product(&v), u.inner_product(&f.adjoint_apply(&v)));
    }

    #[test]
    fn omegas_are_involutive_ring_homomorphisms(a in symfunc(0, 6, 5), b in symfunc(0, 6, 5)) {
        prop_assert_eq!(a.omega().omega(), a.clone());
        prop_assert_eq!(a.omega_tilde().omega_tilde(), a.clone());
        prop_assert_eq!(a.omega_tilde(), omega_tilde_by_evaluation(&a));
        let ab = a.checked_mul(&b).unwrap();
        prop_assert_eq!(ab.omega(), a.omega().checked_mul(&b.omega()).unwrap());
        prop_assert_eq!(ab.omega_tilde(), a.omega_tilde().checked_mul(&b.omega_tilde()).unwrap());
    }

    #[test]
    fn rank_is_a_ring_homomorphism_compatible_with_plethysm(a in symfunc(0, 6, 5), b in symfunc(0, 6, 5), g in symfunc(1, 6, 4)) {
        let ab = a.checked_mul(&b).unwrap();
        prop_assert_eq!(ab.rank(), a.rank().mul(&b.rank()));
        prop_assert_eq!(a.checked_add(&b).unwrap().rank(), a.rank().add(&b.rank()));
        let ag = a.plethysm(&g).unwrap();
        prop_assert_eq!(ag.rank(), a.rank().compose(&g.rank()).unwrap());
    }

    #[test]
    fn characteristic_is_an_isometry(n in 1u32..=6, xs in prop::collection::vec(-3i64..=3, 11), ys in prop::collection::vec(-3i64..=3, 11)) {
        let parts = partitions_of(n);
        let ch = |v: &[i64]| -> VirtualCharacter {
            let f = SymFunc::from_terms(n, parts.iter().zip(v).map(|(p, &c)| (p.clone(), int(c))));
            VirtualCharacter::from_symfunc(&f, n)
        };
        let (chi, psi) = (ch(&xs), ch(&ys));
        prop_assert_eq!(VirtualCharacter::from_symfunc(&chi.characteristic(), n), chi.clone());
        let direct = parts.iter().fold(Rational::zero(), |acc, p| {
            acc + chi.value(p) * psi.value(p) / Rational::from_integer(p.z())
        });
        prop_assert_eq!(chi.characteristic().inner_product(&psi.characteristic()), direct);
    }
}

proptest! {
    #![proptest_config(cfg(24))]

    #[test]
    fn legendre_is_an_involution(f in star(8)) {
        let g = legendre(&f).unwrap();
        prop_assert_eq!(legendre(&g).unwrap(), f);
    }

    #[test]
    fn legendre_derivatives_are_plethystic_inverses(f in star(8)) {
        let g = legendre(&f).unwrap();
        let fp = f.as_symfunc().pderiv(1);
        let gp = g.as_symfunc().pderiv(1);
        let p1 = SymFunc::p(1, 7);
        prop_assert_eq!(gp.plethysm(&fp).unwrap(), p1.clone());
        prop_assert_eq!(fp.plethysm(&gp).unwrap(), p1);
    }

    #[test]
    fn legendre_commutes_with_rank(f in star(8)) {
        let g = legendre(&f).unwrap();
        prop_assert_eq!(g.as_symfunc().rank(), f.as_symfunc().rank().legendre().unwrap());
    }

    #[test]
    fn legendre_intertwines_omega_tilde_and_negation(f in star(8)) {
        let left = legendre(&StarSymFunc::new(f.as_symfunc().omega_tilde()).unwrap()).unwrap().into_symfunc();
        let right = legendre(&StarSymFunc::new(-f.as_symfunc().clone()).unwrap()).unwrap().into_symfunc();
        prop_assert_eq!(-left, right);
    }

    #[test]
    fn exp_laplacian_inverse_pair(f in hlaurent(8)) {
        let there = f.laplacian(Sign::Plus, true).laplacian(Sign::Minus, true);
        prop_assert!(there.agrees_with(&f));
    }

    #[test]
    fn laplacian_preserves_weight(f in hlaurent(8)) {
        for (w, part) in by_weight(&f) {
            for (k, _) in part.delta().iter() {
                prop_assert_eq!(k.weight(), w);
            }
        }
    }

    #[test]
    fn exp_log_are_inverse_and_exp_is_a_homomorphism(a in hlaurent(7), b in hlaurent(7)) {
        let ea = a.pleth_exp().unwrap();
        prop_assert!(ea.pleth_log().unwrap().agrees_with(&a));
        let eb = b.pleth_exp().unwrap();
        let sum = (a.clone() + b.clone()).pleth_exp().unwrap();
        prop_assert!(sum.agrees_with(&(ea * eb)));
    }

    #[test]
    fn feynman_inverts_free_modular(f in hlaurent(7)) {
        let back = graph_sum(&graph_sum(&f, Sign::Minus).unwrap(), Sign::Plus).unwrap();
        prop_assert!(back.agrees_with(&f));
    }

    #[test]
    fn json_roundtrip_symfunc(f in symfunc(0, 8, 10)) {
        let text = json::to_string(&json::symfunc_to_json(&f));
        let back = json::symfunc_from_json(&json::parse(&text).unwrap()).unwrap();
        prop_assert_eq!(json::to_string(&json::symfunc_to_json(&back)), text);
        prop_assert_eq!(back, f);
    }

    #[test]
    fn json_roundtrip_hlaurent(f in hlaurent(8)) {
        let text = json::to_string(&json::hlaurent_to_json(&f));
        let back = json::hlaurent_from_json(&json::parse(&text).unwrap()).unwrap();
        prop_assert_eq!(json::to_string(&json::hlaurent_to_json(&back)), text);
    }
}

fn by_weight(f: &HLaurent) -> BTreeMap<i64, HLaurent> {
    let mut out = BTreeMap::new();
    for w in f.iter().map(|(k, _)| k.weight()).collect::<std::collections::BTreeSet<_>>() {
        out.insert(w, f.filter(|k| k.weight() == w));
    }
    out
}

/// Genus-zero `Ch(TV)` by tree enumeration: `Σ_n` of the tree sums over `n` legs.
fn tree_char(table: &StableCharTable, w: u32) -> SymFunc {
    let mut out = SymFunc::zero(w);
    for n in 3..=w {
        out = out + burnside_char(0, n, table, Twist::Trivial).unwrap().assume_exact_to(w);
    }
    out
}

proptest! {
    #![proptest_config(cfg(8))]

    #[test]
    fn legendre_of_e2_minus_v_is_h2_plus_trees(x3 in prop::collection::vec(-2i64..=2, 3), x4 in prop::collection::vec(-2i64..=2, 5), x5 in -2i64..=2) {
        let w = 7;
        let chi = |n: u32, xs: &[i64]| {
            let f = SymFunc::from_terms(n, partitions_of(n).into_iter().zip(xs).map(|(p, &c)| (p, int(c))));
            VirtualCharacter::from_symfunc(&f, n)
        };
        let table = StableCharTable::new()
            .with(0, 3, chi(3, &x3)).unwrap()
            .with(0, 4, chi(4, &x4)).unwrap()
            .with(0, 5, VirtualCharacter::trivial(5).scale(&int(x5))).unwrap();
        let ch_v = table.entries().values().fold(SymFunc::zero(w), |acc, c| acc + c.characteristic_at(w));
        let f = StarSymFunc::new(e(2, w) - ch_v).unwrap();
        let left = legendre(&f).unwrap().into_symfunc();
        prop_assert_eq!(left, h(2, w) + tree_char(&table, w));
    }
}

/// New index of flag `x` once the flags marked in `removed` are deleted.
fn shifted(x: usize, removed: &[usize]) -> usize {
    x - removed.iter().filter(|&&r| r < x).count()
}

fn shuffle(g: &StableGraph, fp: &[usize], vp: &[usize]) -> StableGraph {
    let raw = g.to_raw();
    let mut involution = vec![0; fp.len()];
    let mut vertex_of = vec![0; fp.len()];
    for x in 0..fp.len() {
        involution[fp[x]] = fp[raw.involution[x]];
        vertex_of[fp[x]] = vp[raw.vertex_of[x]];
    }
    let mut genus = vec![0; vp.len()];
    for (x, &gx) in raw.genus.iter().enumerate() {
        genus[vp[x]] = gx;
    }
    let legs = raw.legs.map(|m| m.into_iter().map(|(k, l)| (fp[k], l)).collect());
    StableGraph::build_validate(RawGraph { involution, vertex_of, genus, legs }).unwrap()
}

fn all_graphs() -> Vec<StableGraph> {
    let mut out = Vec::new();
    for (g, n) in [(0, 5), (1, 2), (1, 3), (2, 0), (2, 1), (3, 0)] {
        for labelled in [true, false] {
            out.extend(enumerate(g, n, labelled).unwrap().into_iter().map(|c| c.graph));
        }
    }
    out
}

proptest! {
    #![proptest_config(cfg(100))]

    #[test]
    fn canonical_key_is_relabelling_invariant(seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for g in all_graphs() {
            let mut fp: Vec<usize> = (0..g.num_flags()).collect();
            fp.shuffle(&mut rng);
            let mut vp: Vec<usize> = (0..g.num_vertices()).collect();
            vp.shuffle(&mut rng);
            let s = shuffle(&g, &fp, &vp);
            let (a, b) = (canonicalize(&g), canonicalize(&s));
            prop_assert_eq!(a.key(), b.key());
            prop_assert_eq!(a.aut_order(), b.aut_order());
        }
    }
}

#[test]
fn graph_invariants_on_enumerated_graphs() {
    for g in all_graphs() {
        let n = g.num_legs() as i64;
        let e = g.num_edges() as i64;
        let types = g.vertex_types();
        assert_eq!(types.iter().map(|t| t.1 as i64).sum::<i64>(), 2 * e + n);
        let gg = g.genus() as i64;
        assert_eq!(2 * (gg - 1) + n, types.iter().map(|&(h, k)| 2 * (h as i64 - 1) + k as i64).sum::<i64>());
        assert_eq!(3 * (gg - 1) + n, e + types.iter().map(|&(h, k)| 3 * (h as i64 - 1) + k as i64).sum::<i64>());
        if g.num_flags() <= 10 {
            assert_eq!(canonicalize(&g).aut_order(), brute_force_aut_count(&g));
        }
        // Genus-zero leaves carry legs, so labelled legs pin down every vertex.
        if g.is_tree() && g.is_labelled() && g.vertex_genus().iter().all(|&x| x == 0) {
            assert_eq!(canonicalize(&g).aut_order(), 1);
        }
    }
}

#[test]
fn contractions_commute() {
    for g in all_graphs() {
        let edges = g.edges();
        for (i, &(a, a2)) in edges.iter().enumerate() {
            for &(b, _) in &edges[i + 1..] {
                let both = canonicalize(&g.contract(&[a, b]).unwrap());
                let first_a = g.contract(&[a]).unwrap();
                let ab = first_a.contract(&[shifted(b, &[a, a2])]).unwrap();
                let b2 = g.involution()[b];
                let first_b = g.contract(&[b]).unwrap();
                let ba = first_b.contract(&[shifted(a, &[b, b2])]).unwrap();
                assert_eq!(canonicalize(&ab).key(), both.key());
                assert_eq!(canonicalize(&ba).key(), both.key());
            }
        }
    }
}

#[test]
fn labelled_trees_with_higher_genus_leaves_can_have_symmetries() {
    let swap = enumerate(2, 1, true)
        .unwrap()
        .into_iter()
        .find(|c| c.graph.is_tree() && c.graph.vertex_types().iter().filter(|t| **t == (1, 1)).count() == 2)
        .unwrap();
    assert_eq!(swap.aut_order(), 2);
}
