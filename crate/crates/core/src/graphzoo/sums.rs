use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::enumerate::{enumerate_filtered, GraphClass};
use crate::error::Result;
use crate::exactsym::{Partition, SymFunc};
use crate::hlaurent::StableCharTable;
use crate::rational::{int, Rational};

/// Cocycle used to weight graphs in [`burnside_char`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Twist {
    Trivial,
    /// Determinant of the edge set, in degree `-|Edge|`.
    K,
}

/// `Σ_G (1/|Aut G|) Π_v a_{g(v),n(v)}` over connected stable graphs with labelled legs.
pub fn wick_rank_sum(g: u32, n: u32, a: &BTreeMap<(u32, u32), Rational>) -> Result<Rational> {
    let classes = enumerate_filtered(g, n, true, &|h, k| a.get(&(h, k)).is_some_and(|x| !x.is_zero()))?;
    let mut total = Rational::zero();
    for c in classes {
        let prod = c.graph.vertex_types().iter().fold(Rational::one(), |acc, t| acc * &a[t]);
        total += prod / int(c.aut_order() as i64);
    }
    Ok(total)
}

/// `Σ_T Π_v a_{n(v)}` over trees with `n` labelled legs.
pub fn tree_sum(n: u32, a: &BTreeMap<u32, Rational>) -> Result<Rational> {
    let a: BTreeMap<(u32, u32), Rational> = a.iter().map(|(&k, v)| ((0, k), v.clone())).collect();
    wick_rank_sum(0, n, &a)
}

/// Cycle type of a permutation restricted to an invariant subset.
fn cycle_type(perm: &[usize], subset: &[usize]) -> Partition {
    let mut seen: BTreeMap<usize, bool> = subset.iter().map(|&x| (x, false)).collect();
    let mut parts = Vec::new();
    for &start in subset {
        if seen[&start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[&x] {
            seen.insert(x, true);
            len += 1;
            x = perm[x];
        }
        parts.push(len);
    }
    Partition::from_parts(parts)
}

fn sign_of(perm: &[usize]) -> i64 {
    let ct = cycle_type(perm, &(0..perm.len()).collect::<Vec<_>>());
    let even = ct.parts().iter().filter(|&&p| p % 2 == 0).count();
    if even % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Trace of one automorphism on `V(H) = ⊗_v V((g(v), n(v)))`.
///
/// Vertices cycled by `a` contribute one factor per cycle: the character of the
/// vertex module at `a^r` restricted to the flags of a representative vertex.
fn trace_on_vertices(class: &GraphClass, a: &[usize], table: &StableCharTable) -> Rational {
    let g = &class.graph;
    let nv = g.num_vertices();
    let flags_at: Vec<Vec<usize>> = (0..nv).map(|v| g.flags_at(v)).collect();
    let vmap: Vec<usize> = (0..nv).map(|v| flags_at[v].first().map_or(v, |&f| g.vertex_of()[a[f]])).collect();
    let mut done = vec![false; nv];
    let mut trace = Rational::one();
    for v in 0..nv {
        if done[v] {
            continue;
        }
        let mut r = 0;
        let mut w = v;
        while !done[w] {
            done[w] = true;
            r += 1;
            w = vmap[w];
        }
        let power: Vec<usize> = (0..a.len())
            .map(|x| {
                let mut y = x;
                for _ in 0..r {
                    y = a[y];
                }
                y
            })
            .collect();
        let genus = g.vertex_genus()[v];
        let valence = flags_at[v].len() as u32;
        let chi = table.get(genus, valence).expect("enumeration is filtered by table support");
        trace *= chi.value(&cycle_type(&power, &flags_at[v]));
        if trace.is_zero() {
            break;
        }
    }
    trace
}

fn edge_sign(class: &GraphClass, a: &[usize]) -> i64 {
    let edges = class.graph.edges();
    let index: BTreeMap<(usize, usize), usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let perm: Vec<usize> = edges
        .iter()
        .map(|&(x, y)| {
            let (u, w) = (a[x], a[y]);
            index[&(u.min(w), u.max(w))]
        })
        .collect();
    let parity = if edges.len().is_multiple_of(2) { 1 } else { -1 };
    parity * sign_of(&perm)
}

/// Characteristic of the `(g, n)` component of the free modular operad on `table`,
/// by averaging traces over automorphisms of leg-unlabelled graphs.
pub fn burnside_char(g: u32, n: u32, table: &StableCharTable, twist: Twist) -> Result<SymFunc> {
    let classes = enumerate_filtered(g, n, false, &|h, k| table.get(h, k).is_some())?;
    let mut terms: BTreeMap<Partition, Rational> = BTreeMap::new();
    for class in &classes {
        let legs: Vec<usize> = (0..class.graph.num_flags()).filter(|&f| class.graph.is_leg(f)).collect();
        let order = int(class.aut_order() as i64);
        for a in class.canon.automorphisms() {
            let mut t = trace_on_vertices(class, a, table);
            if t.is_zero() {
                continue;
            }
            if twist == Twist::K {
                t *= int(edge_sign(class, a));
            }
            *terms.entry(cycle_type(a, &legs)).or_insert_with(Rational::zero) += t / &order;
        }
    }
    Ok(SymFunc::from_terms(n, terms))
}
