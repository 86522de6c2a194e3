use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::graph::{RawGraph, StableGraph};

/// Canonical flag ordering of a graph with its automorphism group.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    /// `order[i]` is the original flag placed at canonical position `i`.
    order: Vec<usize>,
    key: Vec<u32>,
    /// Every automorphism as a flag permutation `flag ↦ image`; the identity comes first.
    automorphisms: Vec<Vec<usize>>,
}

impl CanonicalForm {
    pub fn key(&self) -> &[u32] {
        &self.key
    }

    pub fn key_hex(&self) -> String {
        self.key.iter().map(|x| format!("{:04x}", x)).collect()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// `|Aut(G)|`.
    pub fn aut_order(&self) -> usize {
        self.automorphisms.len()
    }

    pub fn automorphisms(&self) -> &[Vec<usize>] {
        &self.automorphisms
    }

    /// A generating set for the automorphism group, chosen greedily.
    pub fn generators(&self) -> Vec<Vec<usize>> {
        let n = self.order.len();
        let identity: Vec<usize> = (0..n).collect();
        let mut gens: Vec<Vec<usize>> = Vec::new();
        let mut group: HashSet<Vec<usize>> = [identity].into_iter().collect();
        for a in &self.automorphisms {
            if group.contains(a) {
                continue;
            }
            gens.push(a.clone());
            let mut frontier: Vec<Vec<usize>> = group.iter().cloned().collect();
            while let Some(x) = frontier.pop() {
                for g in &gens {
                    let y: Vec<usize> = (0..n).map(|i| g[x[i]]).collect();
                    if group.insert(y.clone()) {
                        frontier.push(y);
                    }
                }
            }
        }
        gens
    }

    /// The graph relabelled into canonical flag order.
    pub fn canonical_graph(&self, g: &StableGraph) -> StableGraph {
        let f = g.num_flags();
        let mut pos = vec![0usize; f];
        for (i, &x) in self.order.iter().enumerate() {
            pos[x] = i;
        }
        let mut vid: BTreeMap<usize, usize> = BTreeMap::new();
        if self.order.is_empty() {
            vid.insert(0, 0);
        }
        for &x in &self.order {
            let next = vid.len();
            vid.entry(g.vertex_of()[x]).or_insert(next);
        }
        let mut genus = vec![0u32; vid.len()];
        for (&old, &new) in &vid {
            genus[new] = g.vertex_genus()[old];
        }
        let raw = RawGraph {
            involution: self.order.iter().map(|&x| pos[g.involution()[x]]).collect(),
            vertex_of: self.order.iter().map(|&x| vid[&g.vertex_of()[x]]).collect(),
            genus,
            legs: g.leg_labels().map(|m| m.iter().map(|(&x, &l)| (pos[x], l)).collect()),
        };
        StableGraph::build_validate(raw).expect("relabelling preserves validity")
    }
}

struct Search<'a> {
    g: &'a StableGraph,
    flags_at: Vec<Vec<usize>>,
    best: Option<Vec<u32>>,
    leaves: Vec<Vec<usize>>,
}

fn rank<T: Ord + Clone>(sigs: &[T]) -> (Vec<u32>, usize) {
    let distinct: BTreeSet<T> = sigs.iter().cloned().collect();
    let index: BTreeMap<T, u32> = distinct.into_iter().enumerate().map(|(i, s)| (s, i as u32)).collect();
    (sigs.iter().map(|s| index[s]).collect(), index.len())
}

impl Search<'_> {
    fn cells(colors: &[u32]) -> usize {
        colors.iter().collect::<BTreeSet<_>>().len()
    }

    /// Equitable refinement along the involution and the vertex partition.
    fn refine(&self, colors: Vec<u32>) -> Vec<u32> {
        let sigma = self.g.involution();
        let vertex_of = self.g.vertex_of();
        let mut colors = colors;
        let mut cells = Self::cells(&colors);
        loop {
            let sigs: Vec<(u32, u32, Vec<u32>)> = (0..colors.len())
                .map(|x| {
                    let mut around: Vec<u32> = self.flags_at[vertex_of[x]].iter().map(|&y| colors[y]).collect();
                    around.sort_unstable();
                    (colors[x], colors[sigma[x]], around)
                })
                .collect();
            let (next, count) = rank(&sigs);
            colors = next;
            if count == cells {
                return colors;
            }
            cells = count;
        }
    }

    fn certificate(&self, order: &[usize]) -> Vec<u32> {
        let g = self.g;
        let mut pos = vec![0u32; order.len()];
        for (i, &x) in order.iter().enumerate() {
            pos[x] = i as u32;
        }
        let mut vid: BTreeMap<usize, u32> = BTreeMap::new();
        let mut cert = vec![order.len() as u32, g.num_vertices() as u32];
        for &x in order {
            let v = g.vertex_of()[x];
            let next = vid.len() as u32;
            let id = *vid.entry(v).or_insert(next);
            cert.extend([pos[g.involution()[x]], id, g.vertex_genus()[v], g.leg_label(x).unwrap_or(0)]);
        }
        if order.is_empty() {
            cert.extend(g.vertex_genus());
        }
        cert
    }

    fn search(&mut self, colors: Vec<u32>) {
        let colors = self.refine(colors);
        let n = colors.len();
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for &c in &colors {
            *counts.entry(c).or_default() += 1;
        }
        match counts.iter().find(|(_, &k)| k > 1) {
            None => {
                let mut order = vec![0usize; n];
                for (x, &c) in colors.iter().enumerate() {
                    order[c as usize] = x;
                }
                let cert = self.certificate(&order);
                match self.best.as_ref().map(|b| cert.cmp(b)) {
                    Some(std::cmp::Ordering::Greater) => {}
                    Some(std::cmp::Ordering::Equal) => self.leaves.push(order),
                    _ => {
                        self.best = Some(cert);
                        self.leaves = vec![order];
                    }
                }
            }
            Some((&target, _)) => {
                for x in (0..n).filter(|&x| colors[x] == target) {
                    let mut next: Vec<u32> = colors.iter().map(|&c| 2 * c + 1).collect();
                    next[x] = 2 * colors[x];
                    self.search(next);
                }
            }
        }
    }
}

/// Canonical form by individualization and refinement over flags.
///
/// Initial colours are (leg label or internal, vertex genus, vertex valence). The full
/// search tree is explored; leaves sharing the minimal certificate differ by exactly
/// one automorphism each.
pub fn canonicalize(g: &StableGraph) -> CanonicalForm {
    let f = g.num_flags();
    let flags_at: Vec<Vec<usize>> = (0..g.num_vertices()).map(|v| g.flags_at(v)).collect();
    let sigs: Vec<(bool, u32, u32, usize)> = (0..f)
        .map(|x| {
            let v = g.vertex_of()[x];
            (g.is_leg(x), g.leg_label(x).unwrap_or(0), g.vertex_genus()[v], flags_at[v].len())
        })
        .collect();
    let (colors, _) = rank(&sigs);
    let mut s = Search { g, flags_at, best: None, leaves: Vec::new() };
    s.search(colors);
    let key = s.best.expect("search reaches at least one leaf");
    let first = s.leaves[0].clone();
    let automorphisms = s
        .leaves
        .iter()
        .map(|leaf| {
            let mut a = vec![0usize; f];
            for i in 0..f {
                a[first[i]] = leaf[i];
            }
            a
        })
        .collect();
    CanonicalForm { order: first, key, automorphisms }
}

/// Counts flag permutations preserving the involution, the vertex partition, vertex
/// genera and leg labels, by exhaustive backtracking.
pub fn brute_force_aut_count(g: &StableGraph) -> usize {
    fn extend(g: &StableGraph, image: &mut Vec<usize>, used: &mut Vec<bool>) -> usize {
        let k = image.len();
        let f = g.num_flags();
        if k == f {
            let sigma = g.involution();
            return (0..f).all(|x| image[sigma[x]] == sigma[image[x]]) as usize;
        }
        let mut total = 0;
        for y in 0..f {
            if used[y] {
                continue;
            }
            let (vx, vy) = (g.vertex_of()[k], g.vertex_of()[y]);
            if g.vertex_genus()[vx] != g.vertex_genus()[vy]
                || g.is_leg(k) != g.is_leg(y)
                || g.leg_label(k) != g.leg_label(y)
            {
                continue;
            }
            let consistent = (0..k).all(|x| (g.vertex_of()[x] == vx) == (g.vertex_of()[image[x]] == vy));
            if !consistent {
                continue;
            }
            image.push(y);
            used[y] = true;
            total += extend(g, image, used);
            used[y] = false;
            image.pop();
        }
        total
    }
    extend(g, &mut Vec::new(), &mut vec![false; g.num_flags()])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labelled(involution: Vec<usize>, vertex_of: Vec<usize>, genus: Vec<u32>) -> StableGraph {
        let legs = (0..involution.len()).filter(|&i| involution[i] == i).enumerate().map(|(k, i)| (i, k as u32 + 1)).collect();
        StableGraph::build_validate(RawGraph { involution, vertex_of, genus, legs: Some(legs) }).unwrap()
    }

    #[test]
    fn loop_with_leg() {
        let g = labelled(vec![1, 0, 2], vec![0, 0, 0], vec![0]);
        let c = canonicalize(&g);
        assert_eq!(c.aut_order(), 2);
        assert_eq!(brute_force_aut_count(&g), 2);
    }

    #[test]
    fn two_genus_one_vertices() {
        let g = labelled(vec![1, 0], vec![0, 1], vec![1, 1]);
        assert_eq!(canonicalize(&g).aut_order(), 2);
        assert_eq!(brute_force_aut_count(&g), 2);
        assert_eq!(canonicalize(&g).generators().len(), 1);
    }

    #[test]
    fn corollas_are_rigid_when_labelled() {
        for (g, n) in [(0, 3), (1, 2), (0, 5), (2, 1)] {
            let c = StableGraph::corolla(g, n, true).unwrap();
            assert_eq!(canonicalize(&c).aut_order(), 1);
            let u = StableGraph::corolla(g, n, false).unwrap();
            assert_eq!(canonicalize(&u).aut_order(), (1..=n).product::<usize>());
        }
    }

    #[test]
    fn theta_graph() {
        // Two trivalent vertices joined by three edges: |Aut| = 2 · 3! = 12.
        let g = labelled(vec![3, 4, 5, 0, 1, 2], vec![0, 0, 0, 1, 1, 1], vec![0, 0]);
        assert_eq!(canonicalize(&g).aut_order(), 12);
        assert_eq!(brute_force_aut_count(&g), 12);
        let gens = canonicalize(&g).generators();
        assert!(gens.len() <= 3);
    }

    #[test]
    fn relabelling_invariance() {
        let g = labelled(vec![3, 4, 5, 0, 1, 2, 6], vec![0, 0, 0, 1, 1, 1, 1], vec![0, 1]);
        let base = canonicalize(&g);
        // Reverse flags and swap vertices.
        let f = g.num_flags();
        let perm: Vec<usize> = (0..f).rev().collect();
        let raw = RawGraph {
            involution: (0..f).map(|i| perm[g.involution()[perm[i]]]).collect(),
            vertex_of: (0..f).map(|i| 1 - g.vertex_of()[perm[i]]).collect(),
            genus: vec![1, 0],
            legs: Some([(perm[6], 1)].into_iter().collect()),
        };
        let h = StableGraph::build_validate(raw).unwrap();
        let c = canonicalize(&h);
        assert_eq!(c.key(), base.key());
        assert_eq!(c.canonical_graph(&h), base.canonical_graph(&g));
    }
}
