use std::collections::BTreeMap;

use crate::error::GraphError;

/// Connected stable graph: flags, an involution pairing flags into edges (fixed
/// points are legs), and a map from flags to vertices.
///
/// Legs are either labelled by `1..=n` or left unlabelled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableGraph {
    involution: Vec<usize>,
    vertex_of: Vec<usize>,
    genus: Vec<u32>,
    leg_labels: Option<BTreeMap<usize, u32>>,
    num_edges: usize,
    num_legs: usize,
    total_genus: u32,
}

/// Unvalidated graph data, as read from JSON or produced by constructions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawGraph {
    pub involution: Vec<usize>,
    pub vertex_of: Vec<usize>,
    pub genus: Vec<u32>,
    /// Flag index to leg label; `None` for unlabelled legs.
    pub legs: Option<BTreeMap<usize, u32>>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl StableGraph {
    pub fn build_validate(raw: RawGraph) -> Result<Self, GraphError> {
        let RawGraph { involution, vertex_of, genus, legs } = raw;
        let f = involution.len();
        if vertex_of.len() != f {
            return Err(GraphError::Length(format!("{} flags but vertex_of has {} entries", f, vertex_of.len())));
        }
        for (i, &j) in involution.iter().enumerate() {
            if j >= f || involution[j] != i {
                return Err(GraphError::NotInvolution(i));
            }
        }
        let v = genus.len();
        if v == 0 {
            return Err(GraphError::Length("no vertices".into()));
        }
        if let Some(&bad) = vertex_of.iter().find(|&&x| x >= v) {
            return Err(GraphError::Length(format!("vertex id {bad} but only {v} genus entries")));
        }
        let mut valence = vec![0usize; v];
        for &x in &vertex_of {
            valence[x] += 1;
        }
        // A flagless vertex only occurs as the whole graph ∗_{g,0}.
        if let Some(empty) = valence.iter().position(|&k| k == 0).filter(|_| v > 1) {
            return Err(GraphError::EmptyVertex(empty));
        }
        for (vertex, (&g, &k)) in genus.iter().zip(&valence).enumerate() {
            if 2 * g as i64 - 2 + k as i64 <= 0 {
                return Err(GraphError::UnstableVertex { vertex, genus: g, valence: k });
            }
        }
        let mut uf = UnionFind::new(v);
        for (i, &j) in involution.iter().enumerate() {
            uf.union(vertex_of[i], vertex_of[j]);
        }
        if (0..v).any(|x| uf.find(x) != 0) {
            return Err(GraphError::Disconnected);
        }
        let leg_flags: Vec<usize> = (0..f).filter(|&i| involution[i] == i).collect();
        let n = leg_flags.len();
        if let Some(map) = &legs {
            let keys: Vec<usize> = map.keys().copied().collect();
            if keys != leg_flags {
                return Err(GraphError::LegLabels(format!("labelled flags {keys:?}, legs are {leg_flags:?}")));
            }
            let mut labels: Vec<u32> = map.values().copied().collect();
            labels.sort_unstable();
            if labels != (1..=n as u32).collect::<Vec<_>>() {
                return Err(GraphError::LegLabels(format!("labels {labels:?} for {n} legs")));
            }
        }
        let num_edges = (f - n) / 2;
        let b1 = num_edges + 1 - v;
        let total_genus = genus.iter().sum::<u32>() + b1 as u32;
        Ok(StableGraph { involution, vertex_of, genus, leg_labels: legs, num_edges, num_legs: n, total_genus })
    }

    /// Single vertex of genus `g` with `n` legs labelled in flag order.
    pub fn corolla(g: u32, n: usize, labelled: bool) -> Result<Self, GraphError> {
        Self::build_validate(RawGraph {
            involution: (0..n).collect(),
            vertex_of: vec![0; n],
            genus: vec![g],
            legs: labelled.then(|| (0..n).map(|i| (i, i as u32 + 1)).collect()),
        })
    }

    pub fn to_raw(&self) -> RawGraph {
        RawGraph {
            involution: self.involution.clone(),
            vertex_of: self.vertex_of.clone(),
            genus: self.genus.clone(),
            legs: self.leg_labels.clone(),
        }
    }

    pub fn num_flags(&self) -> usize {
        self.involution.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.genus.len()
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn num_legs(&self) -> usize {
        self.num_legs
    }

    /// `g(G) = Σ g(v) + b_1(G)`.
    pub fn genus(&self) -> u32 {
        self.total_genus
    }

    pub fn betti(&self) -> usize {
        self.num_edges + 1 - self.num_vertices()
    }

    pub fn involution(&self) -> &[usize] {
        &self.involution
    }

    pub fn vertex_of(&self) -> &[usize] {
        &self.vertex_of
    }

    pub fn vertex_genus(&self) -> &[u32] {
        &self.genus
    }

    pub fn is_labelled(&self) -> bool {
        self.leg_labels.is_some()
    }

    pub fn leg_labels(&self) -> Option<&BTreeMap<usize, u32>> {
        self.leg_labels.as_ref()
    }

    pub fn leg_label(&self, flag: usize) -> Option<u32> {
        self.leg_labels.as_ref().and_then(|m| m.get(&flag).copied())
    }

    pub fn is_leg(&self, flag: usize) -> bool {
        self.involution[flag] == flag
    }

    pub fn valence(&self, vertex: usize) -> usize {
        self.vertex_of.iter().filter(|&&x| x == vertex).count()
    }

    pub fn flags_at(&self, vertex: usize) -> Vec<usize> {
        (0..self.num_flags()).filter(|&i| self.vertex_of[i] == vertex).collect()
    }

    /// Edges as `(smaller flag, larger flag)`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.num_flags()).filter(|&i| self.involution[i] > i).map(|i| (i, self.involution[i])).collect()
    }

    pub fn is_tree(&self) -> bool {
        self.betti() == 0
    }

    /// `(g(v), n(v))` for every vertex.
    pub fn vertex_types(&self) -> Vec<(u32, u32)> {
        let mut val = vec![0u32; self.num_vertices()];
        for &x in &self.vertex_of {
            val[x] += 1;
        }
        self.genus.iter().copied().zip(val).collect()
    }

    /// Contracts the edges containing the given flags. Each edge may be named by either flag.
    pub fn contract(&self, edge_flags: &[usize]) -> Result<Self, GraphError> {
        let f = self.num_flags();
        let mut removed = vec![false; f];
        for &x in edge_flags {
            if x >= f || self.is_leg(x) {
                return Err(GraphError::NotAnEdge(x));
            }
            removed[x] = true;
            removed[self.involution[x]] = true;
        }
        let v = self.num_vertices();
        let mut uf = UnionFind::new(v);
        for i in (0..f).filter(|&i| removed[i] && self.involution[i] > i) {
            uf.union(self.vertex_of[i], self.vertex_of[self.involution[i]]);
        }
        // New vertex ids by first appearance among old vertex ids.
        let mut new_id = BTreeMap::new();
        for x in 0..v {
            let r = uf.find(x);
            let next = new_id.len();
            new_id.entry(r).or_insert(next);
        }
        let nv = new_id.len();
        let mut genus = vec![0u32; nv];
        let mut members = vec![0i64; nv];
        let mut inner_edges = vec![0i64; nv];
        for x in 0..v {
            let id = new_id[&uf.find(x)];
            genus[id] += self.genus[x];
            members[id] += 1;
        }
        for i in (0..f).filter(|&i| removed[i] && self.involution[i] > i) {
            inner_edges[new_id[&uf.find(self.vertex_of[i])]] += 1;
        }
        for id in 0..nv {
            genus[id] += (inner_edges[id] - members[id] + 1) as u32;
        }
        let kept: Vec<usize> = (0..f).filter(|&i| !removed[i]).collect();
        let mut pos = vec![usize::MAX; f];
        for (k, &i) in kept.iter().enumerate() {
            pos[i] = k;
        }
        let raw = RawGraph {
            involution: kept.iter().map(|&i| pos[self.involution[i]]).collect(),
            vertex_of: kept.iter().map(|&i| new_id[&uf.find(self.vertex_of[i])]).collect(),
            genus,
            legs: self.leg_labels.as_ref().map(|m| m.iter().map(|(&i, &l)| (pos[i], l)).collect()),
        };
        Self::build_validate(raw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(involution: Vec<usize>, vertex_of: Vec<usize>, genus: Vec<u32>) -> RawGraph {
        let legs: BTreeMap<usize, u32> =
            (0..involution.len()).filter(|&i| involution[i] == i).enumerate().map(|(k, i)| (i, k as u32 + 1)).collect();
        RawGraph { involution, vertex_of, genus, legs: Some(legs) }
    }

    #[test]
    fn corollas() {
        let g = StableGraph::corolla(1, 1, true).unwrap();
        assert_eq!(g.genus(), 1);
        let g = StableGraph::corolla(0, 3, true).unwrap();
        assert_eq!((g.genus(), g.num_legs(), g.num_edges()), (0, 3, 0));
        assert!(matches!(
            StableGraph::corolla(0, 2, true),
            Err(GraphError::UnstableVertex { vertex: 0, genus: 0, valence: 2 })
        ));
    }

    #[test]
    fn diagnostics() {
        assert!(matches!(
            StableGraph::build_validate(raw(vec![1, 2, 0], vec![0, 0, 0], vec![0])),
            Err(GraphError::NotInvolution(_))
        ));
        assert!(matches!(
            StableGraph::build_validate(raw(vec![0, 1, 2, 3, 4, 5], vec![0, 0, 0, 1, 1, 1], vec![0, 0])),
            Err(GraphError::Disconnected)
        ));
        let mut r = raw(vec![0, 1, 2], vec![0, 0, 0], vec![0]);
        r.legs = Some([(0, 1), (1, 1), (2, 3)].into_iter().collect());
        assert!(matches!(StableGraph::build_validate(r), Err(GraphError::LegLabels(_))));
        assert!(matches!(
            StableGraph::build_validate(raw(vec![0, 1], vec![0, 0], vec![0, 1])),
            Err(GraphError::EmptyVertex(1))
        ));
    }

    #[test]
    fn contract_bridge() {
        // Two trivalent genus-0 vertices, legs 1,2 | 3,4.
        let g = StableGraph::build_validate(raw(vec![0, 1, 3, 2, 4, 5], vec![0, 0, 0, 1, 1, 1], vec![0, 0])).unwrap();
        assert_eq!(g.genus(), 0);
        let c = g.contract(&[2]).unwrap();
        assert_eq!((c.num_vertices(), c.num_legs(), c.vertex_genus()), (1, 4, &[0u32][..]));
        assert_eq!(c.leg_labels().unwrap().values().copied().collect::<Vec<_>>(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn contract_loop() {
        let g = StableGraph::build_validate(raw(vec![1, 0, 2], vec![0, 0, 0], vec![0])).unwrap();
        assert_eq!(g.genus(), 1);
        let c = g.contract(&[0]).unwrap();
        assert_eq!(c, StableGraph::corolla(1, 1, true).unwrap());
        assert_eq!(g.contract(&[]).unwrap(), g);
        assert!(matches!(g.contract(&[2]), Err(GraphError::NotAnEdge(2))));
    }
}
