use std::collections::{BTreeMap, HashSet};

use super::canon::{canonicalize, CanonicalForm};
use super::graph::{RawGraph, StableGraph};
use crate::error::{Error, Result};
use crate::hlaurent::is_stable;

/// One isomorphism class: a representative in canonical flag order and its canonical form.
#[derive(Clone, Debug)]
pub struct GraphClass {
    pub graph: StableGraph,
    pub canon: CanonicalForm,
}

impl GraphClass {
    fn new(g: &StableGraph) -> Self {
        let canon = canonicalize(g);
        let graph = canon.canonical_graph(g);
        // Re-derive on the relabelled graph so flag indices in `canon` refer to `graph`.
        let canon = canonicalize(&graph);
        GraphClass { graph, canon }
    }

    pub fn aut_order(&self) -> usize {
        self.canon.aut_order()
    }
}

/// Multisets of stable vertex types `(g_v, n_v)` whose Euler characteristics add up to
/// `2(g-1)+n` and whose genera leave a non-negative first Betti number.
fn vertex_multisets(g: u32, n: u32, allow: &dyn Fn(u32, u32) -> bool) -> Vec<Vec<(u32, u32)>> {
    let chi = 2 * g as i64 - 2 + n as i64;
    let mut types = Vec::new();
    for h in 0..=g {
        for k in 0..=(chi + 2 - 2 * h as i64).max(0) as u32 {
            if is_stable(h, k) && allow(h, k) {
                types.push((h, k));
            }
        }
    }
    let mut out = Vec::new();
    fn rec(
        types: &[(u32, u32)],
        start: usize,
        chi_left: i64,
        genus_left: i64,
        current: &mut Vec<(u32, u32)>,
        n: u32,
        out: &mut Vec<Vec<(u32, u32)>>,
    ) {
        if chi_left == 0 {
            let total: u32 = current.iter().map(|t| t.1).sum();
            if !current.is_empty() && total >= n && (total - n).is_multiple_of(2) {
                out.push(current.clone());
            }
            return;
        }
        for (i, &(h, k)) in types.iter().enumerate().skip(start) {
            let c = 2 * h as i64 - 2 + k as i64;
            if c <= chi_left && h as i64 <= genus_left {
                current.push((h, k));
                rec(types, i, chi_left - c, genus_left - h as i64, current, n, out);
                current.pop();
            }
        }
    }
    rec(&types, 0, chi, g as i64, &mut Vec::new(), n, &mut out);
    out
}

/// Symmetric multiplicity matrices with `2·A[i][i] + Σ_{j≠i} A[i][j] = degree[i]`.
fn adjacency_matrices(degree: &[u32]) -> Vec<Vec<Vec<u32>>> {
    let v = degree.len();
    let pairs: Vec<(usize, usize)> = (0..v).flat_map(|i| (i..v).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    fn rec(pairs: &[(usize, usize)], idx: usize, left: &mut Vec<u32>, a: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>) {
        if idx == pairs.len() {
            if left.iter().all(|&x| x == 0) {
                out.push(a.clone());
            }
            return;
        }
        let (i, j) = pairs[idx];
        // Once row i's last pair is placed, its degree must be exhausted.
        let max = if i == j { left[i] / 2 } else { left[i].min(left[j]) };
        for m in 0..=max {
            if i == j {
                left[i] -= 2 * m;
            } else {
                left[i] -= m;
                left[j] -= m;
            }
            a[i][j] = m;
            a[j][i] = m;
            let row_done = j + 1 == a.len();
            if !row_done || left[i] == 0 {
                rec(pairs, idx + 1, left, a, out);
            }
            if i == j {
                left[i] += 2 * m;
            } else {
                left[i] += m;
                left[j] += m;
            }
        }
        a[i][j] = 0;
        a[j][i] = 0;
    }
    let mut left = degree.to_vec();
    let mut a = vec![vec![0u32; v]; v];
    rec(&pairs, 0, &mut left, &mut a, &mut out);
    out
}

fn connected(a: &[Vec<u32>]) -> bool {
    let v = a.len();
    let mut seen = vec![false; v];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for y in 0..v {
            if !seen[y] && a[x][y] > 0 {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Flags laid out vertex by vertex: legs first, then loops, then edges to later vertices.
fn build(types: &[(u32, u32)], legs: &[u32], a: &[Vec<u32>]) -> StableGraph {
    let v = types.len();
    let mut vertex_of = Vec::new();
    let mut involution: Vec<usize> = Vec::new();
    // Next free flag slot at each vertex for edges to other vertices.
    let mut pending: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for i in 0..v {
        for _ in 0..legs[i] {
            let f = vertex_of.len();
            vertex_of.push(i);
            involution.push(f);
        }
        for _ in 0..a[i][i] {
            let f = vertex_of.len();
            vertex_of.extend([i, i]);
            involution.extend([f + 1, f]);
        }
        for (j, &count) in a[i].iter().enumerate().take(v) {
            if j == i {
                continue;
            }
            for _ in 0..count {
                let f = vertex_of.len();
                vertex_of.push(i);
                involution.push(usize::MAX);
                pending.entry((i.min(j), i.max(j))).or_default().push(f);
            }
        }
    }
    for ((i, _), flags) in pending {
        let (lo, hi): (Vec<usize>, Vec<usize>) = flags.into_iter().partition(|&f| vertex_of[f] == i);
        for (x, y) in lo.into_iter().zip(hi) {
            involution[x] = y;
            involution[y] = x;
        }
    }
    let raw = RawGraph { involution, vertex_of, genus: types.iter().map(|t| t.0).collect(), legs: None };
    StableGraph::build_validate(raw).expect("construction yields a stable connected graph")
}

fn leg_splits(types: &[(u32, u32)], n: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    fn rec(types: &[(u32, u32)], i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == types.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for l in 0..=left.min(types[i].1) {
            cur.push(l);
            rec(types, i + 1, left - l, cur, out);
            cur.pop();
        }
    }
    rec(types, 0, n, &mut Vec::new(), &mut out);
    out
}

/// All ways of labelling the legs of `g` by `1..=n`, one per way of distributing
/// labels among vertices.
fn labellings(g: &StableGraph) -> Vec<StableGraph> {
    let mut by_vertex: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for f in (0..g.num_flags()).filter(|&f| g.is_leg(f)) {
        by_vertex.entry(g.vertex_of()[f]).or_default().push(f);
    }
    let groups: Vec<Vec<usize>> = by_vertex.into_values().collect();
    let n = g.num_legs() as u32;
    let mut out = Vec::new();
    fn rec(groups: &[Vec<usize>], label: u32, n: u32, fill: &mut Vec<usize>, assign: &mut BTreeMap<usize, u32>, g: &StableGraph, out: &mut Vec<StableGraph>) {
        if label > n {
            let mut raw = g.to_raw();
            raw.legs = Some(assign.clone());
            out.push(StableGraph::build_validate(raw).expect("labels form a bijection"));
            return;
        }
        for k in 0..groups.len() {
            if fill[k] < groups[k].len() {
                let flag = groups[k][fill[k]];
                fill[k] += 1;
                assign.insert(flag, label);
                rec(groups, label + 1, n, fill, assign, g, out);
                assign.remove(&flag);
                fill[k] -= 1;
            }
        }
    }
    rec(&groups, 1, n, &mut vec![0; groups.len()], &mut BTreeMap::new(), g, &mut out);
    out
}

/// Isomorphism classes of connected stable graphs of genus `g` with `n` legs.
pub fn enumerate(g: u32, n: u32, legs_labelled: bool) -> Result<Vec<GraphClass>> {
    enumerate_filtered(g, n, legs_labelled, &|_, _| true)
}

/// As [`enumerate`], keeping only graphs whose vertex types `(g_v, n_v)` satisfy `allow`.
pub fn enumerate_filtered(
    g: u32,
    n: u32,
    legs_labelled: bool,
    allow: &dyn Fn(u32, u32) -> bool,
) -> Result<Vec<GraphClass>> {
    if !is_stable(g, n) {
        return Err(Error::Unstable(g, n));
    }
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut classes = Vec::new();
    for types in vertex_multisets(g, n, allow) {
        for legs in leg_splits(&types, n) {
            let degree: Vec<u32> = types.iter().zip(&legs).map(|(t, l)| t.1 - l).collect();
            for a in adjacency_matrices(&degree) {
                if !connected(&a) {
                    continue;
                }
                let graph = build(&types, &legs, &a);
                let class = GraphClass::new(&graph);
                if seen.insert(class.canon.key().to_vec()) {
                    classes.push(class);
                }
            }
        }
    }
    if legs_labelled {
        let mut labelled = Vec::new();
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        for c in &classes {
            for lg in labellings(&c.graph) {
                let class = GraphClass::new(&lg);
                if seen.insert(class.canon.key().to_vec()) {
                    labelled.push(class);
                }
            }
        }
        classes = labelled;
    }
    classes.sort_by(|x, y| x.canon.key().cmp(y.canon.key()));
    Ok(classes)
}
