//! Multigraphs with stable edge indices, orientations, maximal forests and
//! the circuit and cut vectors they induce.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Finite multigraph. Loops and parallel edges are allowed; edge `k` keeps
/// index `k` for the lifetime of the value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiGraph {
    name: String,
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl MultiGraph {
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for (k, &(u, v)) in edges.iter().enumerate() {
            if u >= num_vertices || v >= num_vertices {
                return Err(Error::InvalidGraph(format!(
                    "edge {k} = ({u},{v}) has an endpoint outside 0..{num_vertices}"
                )));
            }
        }
        Ok(MultiGraph { name: String::new(), num_vertices, edges })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, k: usize) -> (usize, usize) {
        self.edges[k]
    }

    pub fn is_loop(&self, k: usize) -> bool {
        let (u, v) = self.edges[k];
        u == v
    }

    pub fn loop_count(&self) -> usize {
        (0..self.num_edges()).filter(|&k| self.is_loop(k)).count()
    }

    /// The graph with `edges` appended.
    pub fn with_edges(&self, extra: &[(usize, usize)]) -> Result<Self> {
        let mut edges = self.edges.clone();
        edges.extend_from_slice(extra);
        Ok(MultiGraph::new(self.num_vertices, edges)?.with_name(self.name.clone()))
    }

    /// Subgraph on the same vertex set keeping only `keep` (in that order).
    pub fn edge_subgraph(&self, keep: &[usize]) -> Self {
        let edges = keep.iter().map(|&k| self.edges[k]).collect();
        MultiGraph { name: self.name.clone(), num_vertices: self.num_vertices, edges }
    }

    /// Relabels vertices by `perm[old] = new`.
    pub fn relabel_vertices(&self, perm: &[usize]) -> Self {
        let edges = self.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        MultiGraph { name: self.name.clone(), num_vertices: self.num_vertices, edges }
    }

    /// Reorders edges: new edge `i` is old edge `order[i]`.
    pub fn permute_edges(&self, order: &[usize]) -> Self {
        self.edge_subgraph(order)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|&(a, b)| usize::from(a == v) + usize::from(b == v)).sum()
    }

    /// Identifies every vertex of `set` with a single new vertex 0; the
    /// remaining vertices follow in ascending order. Returns the new graph and
    /// the old-to-new vertex map.
    pub fn identify_vertices(&self, set: &[usize]) -> (Self, Vec<usize>) {
        if set.is_empty() {
            return (self.clone(), (0..self.num_vertices).collect());
        }
        let mut map = vec![0; self.num_vertices];
        let mut next = 1;
        for (v, slot) in map.iter_mut().enumerate() {
            if !set.contains(&v) {
                *slot = next;
                next += 1;
            }
        }
        let edges = self.edges.iter().map(|&(u, v)| (map[u], map[v])).collect();
        (MultiGraph { name: self.name.clone(), num_vertices: next, edges }, map)
    }
}

/// Per-edge direction bits: edge `(u, v)` runs `u -> v` unless reversed.
/// Loops carry a bit that is ignored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Orientation {
    reversed: Vec<bool>,
}

impl Orientation {
    /// Every edge directed as listed.
    pub fn default_for(g: &MultiGraph) -> Self {
        Orientation { reversed: vec![false; g.num_edges()] }
    }

    pub fn from_reversed(reversed: Vec<bool>) -> Self {
        Orientation { reversed }
    }

    pub fn len(&self) -> usize {
        self.reversed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reversed.is_empty()
    }

    pub fn is_reversed(&self, e: usize) -> bool {
        self.reversed[e]
    }

    pub fn reversed_bits(&self) -> &[bool] {
        &self.reversed
    }

    pub fn with_reversed(&self, e: usize) -> Self {
        let mut r = self.reversed.clone();
        r[e] = !r[e];
        Orientation { reversed: r }
    }

    pub(crate) fn check(&self, g: &MultiGraph) -> Result<()> {
        if self.reversed.len() != g.num_edges() {
            return Err(Error::ShapeMismatch(format!(
                "orientation has {} bits for {} edges",
                self.reversed.len(),
                g.num_edges()
            )));
        }
        Ok(())
    }

    /// `(tail, head)` of edge `e`.
    pub fn ends(&self, g: &MultiGraph, e: usize) -> (usize, usize) {
        let (u, v) = g.edge(e);
        if self.reversed[e] {
            (v, u)
        } else {
            (u, v)
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Connected components, ordered by smallest vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    pub label: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.classes.len()
    }
}

pub fn components(g: &MultiGraph) -> Components {
    let n = g.num_vertices();
    let mut uf = UnionFind::new(n);
    for &(u, v) in g.edges() {
        uf.union(u, v);
    }
    let mut label = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut root_class = vec![usize::MAX; n];
    for v in 0..n {
        let r = uf.find(v);
        if root_class[r] == usize::MAX {
            root_class[r] = classes.len();
            classes.push(Vec::new());
        }
        label[v] = root_class[r];
        classes[root_class[r]].push(v);
    }
    Components { label, classes }
}

/// Edge partition induced by a maximal forest `M`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ForestCertificate {
    forest_edges: Vec<usize>,
    cotree_edges: Vec<usize>,
}

impl ForestCertificate {
    /// Validates `edges` as a maximal forest of `g`.
    pub fn new(g: &MultiGraph, edges: &[usize]) -> Result<Self> {
        let mut forest = edges.to_vec();
        forest.sort_unstable();
        if forest.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NotMaximalForest("repeated edge".into()));
        }
        let mut uf = UnionFind::new(g.num_vertices());
        for &e in &forest {
            if e >= g.num_edges() {
                return Err(Error::NotMaximalForest(format!("edge {e} out of range")));
            }
            let (u, v) = g.edge(e);
            if !uf.union(u, v) {
                return Err(Error::NotMaximalForest(format!("edge {e} closes a cycle")));
            }
        }
        let c = components(g).count();
        if forest.len() != g.num_vertices() - c {
            return Err(Error::NotMaximalForest(format!(
                "{} edges, a maximal forest has {}",
                forest.len(),
                g.num_vertices() - c
            )));
        }
        let cotree = (0..g.num_edges()).filter(|e| forest.binary_search(e).is_err()).collect();
        Ok(ForestCertificate { forest_edges: forest, cotree_edges: cotree })
    }

    pub fn forest_edges(&self) -> &[usize] {
        &self.forest_edges
    }

    pub fn cotree_edges(&self) -> &[usize] {
        &self.cotree_edges
    }

    pub fn contains(&self, e: usize) -> bool {
        self.forest_edges.binary_search(&e).is_ok()
    }

    pub(crate) fn check(&self, g: &MultiGraph) -> Result<()> {
        if self.forest_edges.len() + self.cotree_edges.len() != g.num_edges() {
            return Err(Error::NotMaximalForest("certificate belongs to another graph".into()));
        }
        ForestCertificate::new(g, &self.forest_edges).map(|_| ())
    }
}

/// Greedy maximal forest scanning edges by ascending index.
pub fn maximal_forest(g: &MultiGraph) -> ForestCertificate {
    let order: Vec<usize> = (0..g.num_edges()).collect();
    maximal_forest_by_order(g, &order)
}

/// Greedy maximal forest scanning edges in the given order.
pub fn maximal_forest_by_order(g: &MultiGraph, order: &[usize]) -> ForestCertificate {
    let mut uf = UnionFind::new(g.num_vertices());
    let mut forest: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&e| {
            let (u, v) = g.edge(e);
            u != v && uf.union(u, v)
        })
        .collect();
    forest.sort_unstable();
    let cotree = (0..g.num_edges()).filter(|e| forest.binary_search(e).is_err()).collect();
    ForestCertificate { forest_edges: forest, cotree_edges: cotree }
}

/// Integer vector indexed by edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeVector(pub Vec<i64>);

impl EdgeVector {
    pub fn dot(&self, other: &EdgeVector) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn support(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, _)| i).collect()
    }
}

/// Signed vector of the unique circuit in `M + e`. The entry at `e` is `-1`;
/// forest edges are `+1` when traversed along their direction on the path
/// from the tail of `e` to its head, `-1` otherwise. A loop is its own
/// circuit.
pub fn fundamental_circuit_vector(
    g: &MultiGraph,
    o: &Orientation,
    f: &ForestCertificate,
    e: usize,
) -> Result<EdgeVector> {
    o.check(g)?;
    if e >= g.num_edges() || f.contains(e) {
        return Err(Error::NotCotreeEdge(e));
    }
    let mut vec = vec![0i64; g.num_edges()];
    vec[e] = -1;
    if g.is_loop(e) {
        return Ok(EdgeVector(vec));
    }
    let (tail, head) = o.ends(g, e);
    // BFS over the forest from tail, remembering the edge used to arrive.
    let n = g.num_vertices();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for &k in f.forest_edges() {
        let (a, b) = g.edge(k);
        adj[a].push((b, k));
        adj[b].push((a, k));
    }
    let mut via: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[tail] = true;
    let mut queue = VecDeque::from([tail]);
    while let Some(x) = queue.pop_front() {
        for &(y, k) in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                via[y] = Some((x, k));
                queue.push_back(y);
            }
        }
    }
    if !seen[head] {
        return Err(Error::NotMaximalForest(format!("endpoints of edge {e} not joined by the forest")));
    }
    let mut cur = head;
    while cur != tail {
        let (prev, k) = via[cur].expect("path exists");
        let (kt, _) = o.ends(g, k);
        vec[k] = if kt == prev { 1 } else { -1 };
        cur = prev;
    }
    Ok(EdgeVector(vec))
}

/// Cut vector of the vertex set `w`: `+1` on non-loop edges directed into
/// `w`, `-1` on edges directed out of it.
pub fn cut_vector(g: &MultiGraph, o: &Orientation, w: &[usize]) -> Result<EdgeVector> {
    o.check(g)?;
    let n = g.num_vertices();
    let mut inside = vec![false; n];
    for &v in w {
        if v >= n {
            return Err(Error::InvalidGraph(format!("vertex {v} out of range")));
        }
        inside[v] = true;
    }
    let size = inside.iter().filter(|&&b| b).count();
    if size == 0 || size == n {
        return Err(Error::EmptyOrFullSet);
    }
    let coords = (0..g.num_edges())
        .map(|e| {
            let (t, h) = o.ends(g, e);
            match (inside[t], inside[h]) {
                (false, true) => 1,
                (true, false) => -1,
                _ => 0,
            }
        })
        .collect();
    Ok(EdgeVector(coords))
}

/// Loops and isthmuses of a graph, as ascending edge lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeClasses {
    pub loops: Vec<usize>,
    pub isthmuses: Vec<usize>,
}

pub fn classify_edges(g: &MultiGraph) -> EdgeClasses {
    let loops = (0..g.num_edges()).filter(|&e| g.is_loop(e)).collect();
    let c = components(g).count();
    let isthmuses = (0..g.num_edges())
        .filter(|&e| !g.is_loop(e))
        .filter(|&e| {
            let keep: Vec<usize> = (0..g.num_edges()).filter(|&k| k != e).collect();
            components(&g.edge_subgraph(&keep)).count() > c
        })
        .collect();
    EdgeClasses { loops, isthmuses }
}

/// The graph with loops and isthmuses deleted, plus the kept edge indices.
pub fn strip_loops_and_isthmuses(g: &MultiGraph) -> (MultiGraph, Vec<usize>) {
    let cls = classify_edges(g);
    let keep: Vec<usize> = (0..g.num_edges())
        .filter(|e| cls.loops.binary_search(e).is_err() && cls.isthmuses.binary_search(e).is_err())
        .collect();
    (g.edge_subgraph(&keep), keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn components_examples() {
        let k3 = fixtures::k3();
        assert_eq!(components(&k3).classes, vec![vec![0, 1, 2]]);
        let empty = MultiGraph::new(3, vec![]).unwrap();
        assert_eq!(components(&empty).classes, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(components(&fixtures::example2()).count(), 1);
    }

    #[test]
    fn invalid_endpoint_rejected() {
        assert!(matches!(MultiGraph::new(2, vec![(0, 2)]), Err(Error::InvalidGraph(_))));
    }

    #[test]
    fn greedy_forests() {
        assert_eq!(maximal_forest(&fixtures::k3()).forest_edges(), &[0, 1]);
        assert_eq!(maximal_forest(&fixtures::example2()).forest_edges(), &[0, 1, 3, 4, 5, 7]);
        let loops = MultiGraph::new(2, vec![(0, 0), (1, 1)]).unwrap();
        assert!(maximal_forest(&loops).forest_edges().is_empty());
    }

    #[test]
    fn forest_validation() {
        let k3 = fixtures::k3();
        assert!(ForestCertificate::new(&k3, &[0, 2]).is_ok());
        assert!(matches!(ForestCertificate::new(&k3, &[0]), Err(Error::NotMaximalForest(_))));
        let g = fixtures::example1();
        assert!(matches!(ForestCertificate::new(&g, &[0, 1]), Err(Error::NotMaximalForest(_))));
    }

    #[test]
    fn circuit_vectors_example1() {
        let g = fixtures::example1();
        let o = fixtures::example1_orientation_minus();
        let f = ForestCertificate::new(&g, &[0]).unwrap();
        assert_eq!(fundamental_circuit_vector(&g, &o, &f, 1).unwrap().0, vec![1, -1, 0]);
        assert_eq!(fundamental_circuit_vector(&g, &o, &f, 2).unwrap().0, vec![-1, 0, -1]);
        assert!(matches!(fundamental_circuit_vector(&g, &o, &f, 0), Err(Error::NotCotreeEdge(0))));
    }

    #[test]
    fn loop_circuit_is_unit_vector() {
        let g = MultiGraph::new(2, vec![(0, 1), (1, 1)]).unwrap();
        let o = Orientation::default_for(&g);
        let f = maximal_forest(&g);
        assert_eq!(fundamental_circuit_vector(&g, &o, &f, 1).unwrap().0, vec![0, -1]);
    }

    #[test]
    fn cut_vector_examples() {
        let k3 = fixtures::k3();
        let o = Orientation::default_for(&k3);
        assert_eq!(cut_vector(&k3, &o, &[0]).unwrap().0, vec![-1, -1, 0]);
        let two = MultiGraph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        let o2 = Orientation::default_for(&two);
        assert_eq!(cut_vector(&two, &o2, &[0, 1]).unwrap().0, vec![0, 0]);
        assert!(matches!(cut_vector(&k3, &o, &[]), Err(Error::EmptyOrFullSet)));
        assert!(matches!(cut_vector(&k3, &o, &[0, 1, 2]), Err(Error::EmptyOrFullSet)));
        // W = {v1} of the bridged example: the v1 row of its incidence matrix
        let g = fixtures::example2();
        let o = Orientation::default_for(&g);
        assert_eq!(cut_vector(&g, &o, &[0]).unwrap().0, vec![-1, -1, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn classify_examples() {
        let cls = classify_edges(&fixtures::example2());
        assert!(cls.loops.is_empty());
        assert_eq!(cls.isthmuses, vec![3]);
        let cls = classify_edges(&fixtures::example3());
        assert!(cls.loops.is_empty() && cls.isthmuses.is_empty());
        let one_loop = MultiGraph::new(1, vec![(0, 0)]).unwrap();
        let cls = classify_edges(&one_loop);
        assert_eq!(cls.loops, vec![0]);
        assert!(cls.isthmuses.is_empty());
    }

    #[test]
    fn identify_vertices_puts_merged_vertex_first() {
        let g = MultiGraph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        let (h, map) = g.identify_vertices(&[0, 2]);
        assert_eq!(h.num_vertices(), 3);
        assert_eq!(map, vec![0, 1, 0, 2]);
        assert_eq!(h.edges(), &[(0, 1), (0, 2)]);
    }
}
