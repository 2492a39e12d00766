//! Independent planarity oracles: a K5 / K3,3 minor search and MacLane's
//! 2-basis criterion. Neither touches lattices or Laplacians.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::budget::{Budget, Decision};
use crate::enumerate::circuits;
use crate::error::{Error, Result};
use crate::graph::{classify_edges, components, MultiGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KuratowskiKind {
    K5,
    K33,
}

/// Branch sets of a K5 or K3,3 minor, as lists of original vertices. For
/// K3,3 the first three sets form one side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KuratowskiEvidence {
    pub kind: KuratowskiKind,
    pub branch_sets: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KuratowskiVerdict {
    Planar,
    Nonplanar(KuratowskiEvidence),
    Unknown,
}

impl KuratowskiVerdict {
    pub fn decision(&self) -> Decision {
        match self {
            KuratowskiVerdict::Planar => Decision::Yes,
            KuratowskiVerdict::Nonplanar(_) => Decision::No,
            KuratowskiVerdict::Unknown => Decision::Unknown,
        }
    }
}

/// Checks that the branch sets are disjoint, connected in `g`, and joined by
/// an edge wherever the minor needs one.
pub fn verify_minor(g: &MultiGraph, ev: &KuratowskiEvidence) -> bool {
    let n = g.num_vertices();
    let want = match ev.kind {
        KuratowskiKind::K5 => 5,
        KuratowskiKind::K33 => 6,
    };
    if ev.branch_sets.len() != want {
        return false;
    }
    let mut owner = vec![usize::MAX; n];
    for (s, set) in ev.branch_sets.iter().enumerate() {
        if set.is_empty() {
            return false;
        }
        for &v in set {
            if v >= n || owner[v] != usize::MAX {
                return false;
            }
            owner[v] = s;
        }
    }
    for (s, set) in ev.branch_sets.iter().enumerate() {
        let mut seen = vec![set[0]];
        let mut stack = vec![set[0]];
        while let Some(v) = stack.pop() {
            for &(a, b) in g.edges() {
                let w = if a == v { b } else if b == v { a } else { continue };
                if owner[w] == s && !seen.contains(&w) {
                    seen.push(w);
                    stack.push(w);
                }
            }
        }
        if seen.len() != set.len() {
            return false;
        }
    }
    let joined = |x: usize, y: usize| {
        g.edges().iter().any(|&(a, b)| {
            a != b && ((owner[a] == x && owner[b] == y) || (owner[a] == y && owner[b] == x))
        })
    };
    match ev.kind {
        KuratowskiKind::K5 => (0..5).all(|x| (x + 1..5).all(|y| joined(x, y))),
        KuratowskiKind::K33 => (0..3).all(|x| (3..6).all(|y| joined(x, y))),
    }
}

/// Simple graph with per-vertex branch sets, both as bitmasks.
#[derive(Clone)]
struct MinorState {
    adj: Vec<u64>,
    sets: Vec<u64>,
}

impl MinorState {
    fn from_graph(g: &MultiGraph) -> Self {
        let n = g.num_vertices();
        let mut adj = vec![0u64; n];
        for &(a, b) in g.edges() {
            if a != b {
                adj[a] |= 1 << b;
                adj[b] |= 1 << a;
            }
        }
        MinorState { adj, sets: (0..n).map(|v| 1u64 << v).collect() }
    }

    fn n(&self) -> usize {
        self.adj.len()
    }

    fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    fn remove_vertex(&mut self, v: usize) {
        self.adj.remove(v);
        self.sets.remove(v);
        let low = (1u64 << v) - 1;
        for a in self.adj.iter_mut() {
            *a = (*a & low) | ((*a >> 1) & !low);
        }
    }

    /// Contracts `v` into `u`.
    fn contract(&mut self, u: usize, v: usize) {
        let nv = self.adj[v] & !(1 << u);
        self.sets[u] |= self.sets[v];
        self.adj[u] |= nv;
        for w in 0..self.n() {
            if nv >> w & 1 == 1 {
                self.adj[w] |= 1 << u;
            }
        }
        self.remove_vertex(v);
    }


    /// Drops vertices of degree at most 1 and suppresses degree-2 vertices.
    fn reduce(&mut self) {
        loop {
            let Some(v) = (0..self.n()).find(|&v| self.adj[v].count_ones() <= 2) else {
                return;
            };
            if self.adj[v].count_ones() == 2 {
                let u = self.adj[v].trailing_zeros() as usize;
                self.contract(u, v);
            } else {
                self.remove_vertex(v);
            }
        }
    }

    fn sets_of(&self, vs: &[usize]) -> Vec<Vec<usize>> {
        vs.iter().map(|&v| (0..64).filter(|&b| self.sets[v] >> b & 1 == 1).collect()).collect()
    }

    fn find_base(&self) -> Option<KuratowskiEvidence> {
        let n = self.n();
        let subsets = |k: usize| -> Vec<Vec<usize>> {
            let mut out = Vec::new();
            let mut cur = Vec::new();
            fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
                if cur.len() == k {
                    out.push(cur.clone());
                    return;
                }
                for v in start..n {
                    cur.push(v);
                    rec(v + 1, n, k, cur, out);
                    cur.pop();
                }
            }
            rec(0, n, k, &mut cur, &mut out);
            out
        };
        for s in subsets(5) {
            if s.iter().all(|&a| s.iter().all(|&b| a == b || self.adj[a] >> b & 1 == 1)) {
                return Some(KuratowskiEvidence { kind: KuratowskiKind::K5, branch_sets: self.sets_of(&s) });
            }
        }
        for s in subsets(6) {
            for pick in subsets_of(&s[1..], 2) {
                let mut left = vec![s[0]];
                left.extend(pick);
                let right: Vec<usize> = s.iter().copied().filter(|v| !left.contains(v)).collect();
                if left.iter().all(|&a| right.iter().all(|&b| self.adj[a] >> b & 1 == 1)) {
                    let mut order = left.clone();
                    order.extend(&right);
                    return Some(KuratowskiEvidence { kind: KuratowskiKind::K33, branch_sets: self.sets_of(&order) });
                }
            }
        }
        None
    }
}

fn subsets_of(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut with: Vec<Vec<usize>> = subsets_of(&items[1..], k - 1)
        .into_iter()
        .map(|mut s| {
            s.insert(0, items[0]);
            s
        })
        .collect();
    with.extend(subsets_of(&items[1..], k));
    with
}

/// Planarity by searching for a K5 or K3,3 minor with edge deletions and
/// contractions. Exhausting the search proves planarity.
pub fn kuratowski_oracle(g: &MultiGraph, budget: &mut Budget) -> KuratowskiVerdict {
    if g.num_vertices() > 64 {
        return KuratowskiVerdict::Unknown;
    }
    let mut memo: HashSet<Vec<u64>> = HashSet::new();
    match minor_search(MinorState::from_graph(g), &mut memo, budget) {
        Ok(Some(ev)) => {
            debug_assert!(verify_minor(g, &ev));
            KuratowskiVerdict::Nonplanar(ev)
        }
        Ok(None) => KuratowskiVerdict::Planar,
        Err(_) => KuratowskiVerdict::Unknown,
    }
}

fn minor_search(
    mut s: MinorState,
    memo: &mut HashSet<Vec<u64>>,
    budget: &mut Budget,
) -> Result<Option<KuratowskiEvidence>> {
    budget.tick()?;
    s.reduce();
    let n = s.n();
    let m = s.edge_count();
    if n < 5 || m < 9 {
        return Ok(None);
    }
    if !memo.insert(s.adj.clone()) {
        return Ok(None);
    }
    if n <= 6 {
        if let Some(ev) = s.find_base() {
            return Ok(Some(ev));
        }
        if n == 5 {
            return Ok(None);
        }
    }
    // A model on fewer vertices either merges two vertices of some branch
    // set or leaves a vertex unused, so these branches are exhaustive.
    let adj = s.adj.clone();
    let deg = |v: usize| adj[v].count_ones();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if adj[u] >> v & 1 == 1 {
                edges.push((u, v));
            }
        }
    }
    edges.sort_by_key(|&(u, v)| std::cmp::Reverse(deg(u) + deg(v)));
    for (u, v) in edges {
        let mut c = s.clone();
        c.contract(u, v);
        if let Some(ev) = minor_search(c, memo, budget)? {
            return Ok(Some(ev));
        }
    }
    let mut verts: Vec<usize> = (0..n).collect();
    verts.sort_by_key(|&v| deg(v));
    for v in verts {
        let mut d = s.clone();
        d.remove_vertex(v);
        if let Some(ev) = minor_search(d, memo, budget)? {
            return Ok(Some(ev));
        }
    }
    Ok(None)
}

/// A MacLane 2-basis: circuits, as edge masks, independent over GF(2), with
/// no edge in more than two of them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoBasis {
    pub circuits: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MacLaneVerdict {
    Planar(TwoBasis),
    Nonplanar,
    Unknown,
}

impl MacLaneVerdict {
    pub fn decision(&self) -> Decision {
        match self {
            MacLaneVerdict::Planar(_) => Decision::Yes,
            MacLaneVerdict::Nonplanar => Decision::No,
            MacLaneVerdict::Unknown => Decision::Unknown,
        }
    }
}

/// Exhaustive search for a basis of the cycle space made of circuits in
/// which every edge appears at most twice. Any 2-basis can be traded for one
/// made of circuits, so exhausting the search shows none exists.
pub fn maclane_oracle(g: &MultiGraph, budget: &mut Budget) -> MacLaneVerdict {
    match maclane_search(g, budget) {
        Ok(Some(b)) => MacLaneVerdict::Planar(b),
        Ok(None) => MacLaneVerdict::Nonplanar,
        Err(_) => MacLaneVerdict::Unknown,
    }
}

fn maclane_search(g: &MultiGraph, budget: &mut Budget) -> Result<Option<TwoBasis>> {
    let m = g.num_edges();
    if m > 64 {
        return Err(Error::CapExceeded { cap: 64 });
    }
    let k = m + components(g).count() - g.num_vertices();
    if k == 0 {
        return Ok(Some(TwoBasis { circuits: vec![] }));
    }
    let mut cs = circuits(g, 200_000)?;
    cs.sort_by_key(|c| (c.count_ones(), *c));
    let cycle_edges: u64 = cs.iter().fold(0, |a, c| a | c);
    debug_assert_eq!(cycle_edges.count_ones() as usize, m - classify_edges(g).isthmuses.len());
    // last[e]: highest circuit index containing e.
    let mut last = vec![None; m];
    for (i, c) in cs.iter().enumerate() {
        for (e, slot) in last.iter_mut().enumerate() {
            if c >> e & 1 == 1 {
                *slot = Some(i);
            }
        }
    }
    let mut ctx = MacLane { cs: &cs, last: &last, k, cycle_edges, mult: vec![0u8; m], chosen: Vec::new() };
    if ctx.rec(0, &mut Vec::new(), budget)? {
        let circuits = ctx
            .chosen
            .iter()
            .map(|&i| (0..m).filter(|&e| cs[i] >> e & 1 == 1).collect())
            .collect();
        return Ok(Some(TwoBasis { circuits }));
    }
    Ok(None)
}

struct MacLane<'a> {
    cs: &'a [u64],
    last: &'a [Option<usize>],
    k: usize,
    cycle_edges: u64,
    mult: Vec<u8>,
    chosen: Vec<usize>,
}

impl MacLane<'_> {
    /// `basis` holds reduced GF(2) vectors keyed by their lowest set bit.
    fn rec(&mut self, start: usize, basis: &mut Vec<u64>, budget: &mut Budget) -> Result<bool> {
        if self.chosen.len() == self.k {
            return Ok(true);
        }
        let covered: u64 = self.chosen.iter().fold(0, |a, &i| a | self.cs[i]);
        // every cycle edge must end up in some basis circuit
        let uncovered = self.cycle_edges & !covered;
        for e in 0..self.mult.len() {
            if uncovered >> e & 1 == 1 && self.last[e].map_or(true, |l| l < start) {
                return Ok(false);
            }
        }
        let slots = self.k - self.chosen.len();
        let capacity: usize = (0..self.mult.len())
            .filter(|&e| self.cycle_edges >> e & 1 == 1)
            .map(|e| 2 - self.mult[e] as usize)
            .sum();
        if start < self.cs.len() && capacity < slots * self.cs[start].count_ones() as usize {
            return Ok(false);
        }
        for i in start..self.cs.len() {
            if self.cs.len() - i < slots {
                break;
            }
            budget.tick()?;
            let c = self.cs[i];
            if (0..self.mult.len()).any(|e| c >> e & 1 == 1 && self.mult[e] >= 2) {
                continue;
            }
            let mut r = c;
            for &b in basis.iter() {
                if r >> b.trailing_zeros() & 1 == 1 {
                    r ^= b;
                }
            }
            if r == 0 {
                continue;
            }
            basis.push(r);
            for e in 0..self.mult.len() {
                if c >> e & 1 == 1 {
                    self.mult[e] += 1;
                }
            }
            self.chosen.push(i);
            if self.rec(i + 1, basis, budget)? {
                return Ok(true);
            }
            self.chosen.pop();
            for e in 0..self.mult.len() {
                if c >> e & 1 == 1 {
                    self.mult[e] -= 1;
                }
            }
            basis.pop();
        }
        Ok(false)
    }
}
