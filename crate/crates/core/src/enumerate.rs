//! Exhaustive combinatorial oracles: maximal forests, circuits,
//! 2-isomorphism by edge-bijection search, and multigraph isomorphism.
//!
//! These only look at edge sets and vertex incidences, never at matrices, so
//! they can serve as ground truth for the algebraic routes.

use std::collections::{HashMap, HashSet};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::{classify_edges, components, ForestCertificate, MultiGraph, UnionFind};

/// Edge sets as bitmasks; the brute-force routines need `m <= 64`.
pub type EdgeMask = u64;

fn mask_of(edges: &[usize]) -> EdgeMask {
    edges.iter().fold(0, |m, &e| m | (1 << e))
}

fn check_small(g: &MultiGraph) -> Result<()> {
    if g.num_edges() > 64 {
        return Err(Error::ShapeMismatch(format!("{} edges; enumeration supports at most 64", g.num_edges())));
    }
    Ok(())
}

/// All maximal forests in lexicographic order of their edge lists.
pub fn enumerate_maximal_forests(g: &MultiGraph, cap: usize) -> Result<Vec<ForestCertificate>> {
    let need = g.num_vertices() - components(g).count();
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(need);

    fn rec(
        g: &MultiGraph,
        start: usize,
        need: usize,
        uf: &UnionFind,
        chosen: &mut Vec<usize>,
        out: &mut Vec<ForestCertificate>,
        cap: usize,
    ) -> Result<()> {
        if chosen.len() == need {
            if out.len() == cap {
                return Err(Error::CapExceeded { cap });
            }
            out.push(ForestCertificate::new(g, chosen).expect("acyclic of full size"));
            return Ok(());
        }
        let m = g.num_edges();
        for e in start..m {
            if m - e < need - chosen.len() {
                break;
            }
            let (u, v) = g.edge(e);
            let mut next = uf.clone();
            if u == v || !next.union(u, v) {
                continue;
            }
            chosen.push(e);
            rec(g, e + 1, need, &next, chosen, out, cap)?;
            chosen.pop();
        }
        Ok(())
    }

    rec(g, 0, need, &UnionFind::new(g.num_vertices()), &mut chosen, &mut out, cap)?;
    Ok(out)
}

pub fn forest_masks(g: &MultiGraph, cap: usize) -> Result<Vec<EdgeMask>> {
    check_small(g)?;
    Ok(enumerate_maximal_forests(g, cap)?.iter().map(|f| mask_of(f.forest_edges())).collect())
}

/// Edge sets of all circuits (loops, parallel pairs and longer cycles).
/// Each circuit is found once, from its smallest edge.
pub fn circuits(g: &MultiGraph, cap: usize) -> Result<Vec<EdgeMask>> {
    check_small(g)?;
    let n = g.num_vertices();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (k, &(u, v)) in g.edges().iter().enumerate() {
        if u != v {
            adj[u].push((v, k));
            adj[v].push((u, k));
        }
    }
    let mut out = Vec::new();
    for e in 0..g.num_edges() {
        let (u, v) = g.edge(e);
        if u == v {
            push_capped(&mut out, 1 << e, cap)?;
            continue;
        }
        // simple paths v -> u through edges with index > e
        let mut on_path = vec![false; n];
        on_path[v] = true;
        dfs_paths(&adj, e, v, u, 1 << e, &mut on_path, &mut out, cap)?;
    }
    Ok(out)
}

fn push_capped(out: &mut Vec<EdgeMask>, m: EdgeMask, cap: usize) -> Result<()> {
    if out.len() == cap {
        return Err(Error::CapExceeded { cap });
    }
    out.push(m);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn dfs_paths(
    adj: &[Vec<(usize, usize)>],
    min_edge: usize,
    at: usize,
    target: usize,
    mask: EdgeMask,
    on_path: &mut [bool],
    out: &mut Vec<EdgeMask>,
    cap: usize,
) -> Result<()> {
    for &(w, k) in &adj[at] {
        if k <= min_edge {
            continue;
        }
        if w == target {
            push_capped(out, mask | (1 << k), cap)?;
            continue;
        }
        if on_path[w] {
            continue;
        }
        on_path[w] = true;
        dfs_paths(adj, min_edge, w, target, mask | (1 << k), on_path, out, cap)?;
        on_path[w] = false;
    }
    Ok(())
}

/// Decides whether two graphs are 2-isomorphic by searching for an edge
/// bijection that carries the maximal forests of `g1` onto those of `g2`.
///
/// Returns `Ok(Some(beta))` with `beta[e1] = e2`, `Ok(None)` when the search
/// space is exhausted, and `Err(BudgetExceeded)` when the budget runs out.
pub fn decide_2_isomorphism_bruteforce(
    g1: &MultiGraph,
    g2: &MultiGraph,
    budget: &mut Budget,
) -> Result<Option<Vec<usize>>> {
    check_small(g1)?;
    check_small(g2)?;
    let m = g1.num_edges();
    if m != g2.num_edges() {
        return Ok(None);
    }
    let r1 = g1.num_vertices() - components(g1).count();
    let r2 = g2.num_vertices() - components(g2).count();
    if r1 != r2 || g1.loop_count() != g2.loop_count() {
        return Ok(None);
    }
    const CAP: usize = 1 << 20;
    let f1 = forest_masks(g1, CAP)?;
    let f2 = forest_masks(g2, CAP)?;
    if f1.len() != f2.len() {
        return Ok(None);
    }
    let c1 = circuits(g1, CAP)?;
    let c2 = circuits(g2, CAP)?;
    if c1.len() != c2.len() {
        return Ok(None);
    }
    let p1 = edge_profiles(g1, &c1);
    let p2 = edge_profiles(g2, &c2);
    let mut s1 = p1.clone();
    let mut s2 = p2.clone();
    s1.sort();
    s2.sort();
    if s1 != s2 {
        return Ok(None);
    }
    let c2_set: HashSet<EdgeMask> = c2.iter().copied().collect();
    let f2_set: HashSet<EdgeMask> = f2.iter().copied().collect();

    // circuits of g1 indexed by their largest edge, checked once that edge is placed
    let mut closing: Vec<Vec<EdgeMask>> = vec![Vec::new(); m];
    for &c in &c1 {
        closing[63 - c.leading_zeros() as usize].push(c);
    }
    let mut beta = vec![usize::MAX; m];
    let mut used = vec![false; m];
    let mut search = Search { p1: &p1, p2: &p2, closing: &closing, c2: &c2_set, f1: &f1, f2: &f2_set, budget };
    if search.assign(0, &mut beta, &mut used)? {
        Ok(Some(beta))
    } else {
        Ok(None)
    }
}

/// Per-edge invariant of the cycle matroid: loop flag, isthmus flag and the
/// sorted sizes of the circuits through the edge.
fn edge_profiles(g: &MultiGraph, circuits: &[EdgeMask]) -> Vec<(bool, bool, Vec<u32>)> {
    let cls = classify_edges(g);
    (0..g.num_edges())
        .map(|e| {
            let mut sizes: Vec<u32> =
                circuits.iter().filter(|&&c| c & (1 << e) != 0).map(|c| c.count_ones()).collect();
            sizes.sort_unstable();
            (cls.loops.contains(&e), cls.isthmuses.contains(&e), sizes)
        })
        .collect()
}

struct Search<'a> {
    p1: &'a [(bool, bool, Vec<u32>)],
    p2: &'a [(bool, bool, Vec<u32>)],
    closing: &'a [Vec<EdgeMask>],
    c2: &'a HashSet<EdgeMask>,
    f1: &'a [EdgeMask],
    f2: &'a HashSet<EdgeMask>,
    budget: &'a mut Budget,
}

fn image(mask: EdgeMask, beta: &[usize]) -> EdgeMask {
    let mut out = 0;
    let mut m = mask;
    while m != 0 {
        let e = m.trailing_zeros() as usize;
        out |= 1 << beta[e];
        m &= m - 1;
    }
    out
}

impl Search<'_> {
    fn assign(&mut self, e: usize, beta: &mut [usize], used: &mut [bool]) -> Result<bool> {
        let m = beta.len();
        if e == m {
            // circuits map onto circuits (equal counts), now confirm forests map to forests
            let ok = self.f1.iter().all(|&f| self.f2.contains(&image(f, beta)));
            return Ok(ok);
        }
        for t in 0..m {
            if used[t] || self.p1[e] != self.p2[t] {
                continue;
            }
            self.budget.tick()?;
            beta[e] = t;
            if self.closing[e].iter().all(|&c| self.c2.contains(&image(c, beta))) {
                used[t] = true;
                if self.assign(e + 1, beta, used)? {
                    return Ok(true);
                }
                used[t] = false;
            }
            beta[e] = usize::MAX;
        }
        Ok(false)
    }
}

/// Vertex bijection `perm[v1] = v2` making the loopless parts of two graphs
/// identical as multisets of vertex pairs, if one exists. Loops are ignored
/// except for their total count.
pub fn isomorphic_up_to_loops(g1: &MultiGraph, g2: &MultiGraph) -> Option<Vec<usize>> {
    let n = g1.num_vertices();
    if n != g2.num_vertices() || g1.num_edges() != g2.num_edges() || g1.loop_count() != g2.loop_count() {
        return None;
    }
    let mult = |g: &MultiGraph| {
        let mut m: HashMap<(usize, usize), usize> = HashMap::new();
        for &(u, v) in g.edges() {
            if u != v {
                *m.entry((u.min(v), u.max(v))).or_default() += 1;
            }
        }
        m
    };
    let m1 = mult(g1);
    let m2 = mult(g2);
    let deg = |g: &MultiGraph| -> Vec<usize> {
        (0..n).map(|v| g.edges().iter().filter(|&&(a, b)| a != b && (a == v || b == v)).count()).collect()
    };
    let d1 = deg(g1);
    let d2 = deg(g2);
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn rec(
        v: usize,
        n: usize,
        perm: &mut [usize],
        used: &mut [bool],
        d1: &[usize],
        d2: &[usize],
        m1: &HashMap<(usize, usize), usize>,
        m2: &HashMap<(usize, usize), usize>,
    ) -> bool {
        if v == n {
            return true;
        }
        for w in 0..n {
            if used[w] || d1[v] != d2[w] {
                continue;
            }
            perm[v] = w;
            let consistent = (0..=v).all(|u| {
                let a = m1.get(&(u.min(v), u.max(v))).copied().unwrap_or(0);
                let (pu, pv) = (perm[u], perm[v]);
                let b = m2.get(&(pu.min(pv), pu.max(pv))).copied().unwrap_or(0);
                a == b
            });
            if consistent {
                used[w] = true;
                if rec(v + 1, n, perm, used, d1, d2, m1, m2) {
                    return true;
                }
                used[w] = false;
            }
        }
        perm[v] = usize::MAX;
        false
    }

    rec(0, n, &mut perm, &mut used, &d1, &d2, &m1, &m2).then_some(perm)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// One representative of every isomorphism class of connected simple graphs
/// on `n` vertices, `n <= 7`. Edges of each representative are listed in
/// lexicographic order of the canonical labelling.
pub fn connected_simple_graphs(n: usize) -> Vec<MultiGraph> {
    assert!(n <= 7, "catalog is exhaustive over edge subsets; keep n small");
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let perms = permutations(n);
    let mut seen: HashSet<u64> = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let edges: Vec<(usize, usize)> = (0..pairs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
        if edges.len() + 1 < n {
            continue;
        }
        let mut uf = UnionFind::new(n);
        for &(u, v) in &edges {
            uf.union(u, v);
        }
        if n > 0 && (0..n).any(|v| uf.find(v) != uf.find(0)) {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                edges.iter().fold(0u64, |acc, &(u, v)| {
                    let (a, b) = (p[u].min(p[v]), p[u].max(p[v]));
                    acc | 1 << index[&(a, b)]
                })
            })
            .min()
            .unwrap_or(0);
        if seen.insert(canon) {
            let es = (0..pairs.len()).filter(|&i| canon >> i & 1 == 1).map(|i| pairs[i]).collect();
            out.push(MultiGraph::new(n, es).expect("valid edges").with_name(format!("n{n}-{}", out.len())));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn catalog_counts() {
        // OEIS A001349: 1, 1, 2, 6, 21, 112
        let counts: Vec<usize> = (1..=6).map(|n| connected_simple_graphs(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21, 112]);
    }

    /// Forest count by checking every subset of the right size.
    fn forests_by_subsets(g: &MultiGraph) -> usize {
        let need = g.num_vertices() - components(g).count();
        let m = g.num_edges();
        (0u64..(1 << m))
            .filter(|s| s.count_ones() as usize == need)
            .filter(|&s| {
                let mut uf = UnionFind::new(g.num_vertices());
                (0..m).filter(|e| s & (1 << e) != 0).all(|e| {
                    let (u, v) = g.edge(e);
                    uf.union(u, v)
                })
            })
            .count()
    }

    #[test]
    fn forest_counts() {
        assert_eq!(enumerate_maximal_forests(&fixtures::k3(), 100).unwrap().len(), 3);
        let ex1 = enumerate_maximal_forests(&fixtures::example1(), 100).unwrap();
        let lists: Vec<&[usize]> = ex1.iter().map(|f| f.forest_edges()).collect();
        assert_eq!(lists, vec![&[0][..], &[1], &[2]]);
        let p = fixtures::path(4);
        assert_eq!(enumerate_maximal_forests(&p, 100).unwrap().len(), 1);
        for g in [fixtures::complete(4), fixtures::example2(), fixtures::example3()] {
            assert_eq!(enumerate_maximal_forests(&g, 10_000).unwrap().len(), forests_by_subsets(&g));
        }
        assert!(matches!(
            enumerate_maximal_forests(&fixtures::complete(5), 10),
            Err(Error::CapExceeded { cap: 10 })
        ));
    }

    #[test]
    fn example2_tree_is_a_maximal_forest() {
        let g = fixtures::example2();
        let all = enumerate_maximal_forests(&g, 10_000).unwrap();
        assert!(all.iter().any(|f| f.forest_edges() == fixtures::EXAMPLE2_TREE));
    }

    #[test]
    fn circuit_counts() {
        assert_eq!(circuits(&fixtures::k3(), 100).unwrap().len(), 1);
        // theta graph: three parallel pairs
        assert_eq!(circuits(&fixtures::example1(), 100).unwrap().len(), 3);
        // K4: 4 triangles + 3 quadrilaterals
        assert_eq!(circuits(&fixtures::complete(4), 100).unwrap().len(), 7);
        // K5: 10 + 15 + 12
        assert_eq!(circuits(&fixtures::complete(5), 100).unwrap().len(), 37);
        let l = MultiGraph::new(1, vec![(0, 0)]).unwrap();
        assert_eq!(circuits(&l, 10).unwrap(), vec![1]);
    }

    #[test]
    fn two_isomorphism_examples() {
        let mut b = Budget::new(1_000_000);
        let k3 = fixtures::k3();
        assert_eq!(decide_2_isomorphism_bruteforce(&k3, &k3, &mut b).unwrap(), Some(vec![0, 1, 2]));
        assert_eq!(decide_2_isomorphism_bruteforce(&fixtures::example1(), &k3, &mut b).unwrap(), None);
        let quad = fixtures::multiply_edges(&k3, 4);
        assert_eq!(decide_2_isomorphism_bruteforce(&k3, &quad, &mut b).unwrap(), None);
        // a path and a star on the same number of edges are 2-isomorphic (both free matroids)
        let star = MultiGraph::new(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(decide_2_isomorphism_bruteforce(&fixtures::path(4), &star, &mut b).unwrap().is_some());
    }

    #[test]
    fn two_isomorphism_budget_is_not_a_no() {
        let mut b = Budget::new(2);
        let k4 = fixtures::complete(4);
        assert!(matches!(decide_2_isomorphism_bruteforce(&k4, &k4, &mut b), Err(Error::BudgetExceeded)));
    }

    #[test]
    fn isomorphism_up_to_loops() {
        let g = fixtures::example2_dual();
        let relabeled = g.relabel_vertices(&[2, 0, 3, 1]);
        assert!(isomorphic_up_to_loops(&g, &relabeled).is_some());
        // moving the loop does not matter
        let mut edges = g.edges().to_vec();
        edges[3] = (2, 2);
        let moved = MultiGraph::new(4, edges).unwrap();
        assert!(isomorphic_up_to_loops(&g, &moved).is_some());
        assert!(isomorphic_up_to_loops(&fixtures::k3(), &fixtures::example1()).is_none());
    }
}
