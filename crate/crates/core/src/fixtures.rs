//! Named graphs used in examples, tests and the demo page.
//!
//! The three worked examples use 0-based vertices and edges: `v1..v7` become
//! `0..6` and `e1..e9` become `0..8`.

use crate::graph::{MultiGraph, Orientation};

fn build(name: &str, n: usize, edges: &[(usize, usize)]) -> MultiGraph {
    MultiGraph::new(n, edges.to_vec()).expect("fixture endpoints in range").with_name(name)
}

pub fn k3() -> MultiGraph {
    build("K3", 3, &[(0, 1), (0, 2), (1, 2)])
}

/// Two vertices joined by three parallel edges (dual to K3).
pub fn example1() -> MultiGraph {
    build("theta", 2, &[(0, 1), (0, 1), (0, 1)])
}

/// Orientation of [`example1`] whose cut block for forest `{e1}` is `(1, -1)`.
pub fn example1_orientation_minus() -> Orientation {
    Orientation::from_reversed(vec![false, false, true])
}

/// Orientation of [`example1`] whose cut block for forest `{e1}` is `(1, 1)`.
pub fn example1_orientation_plus() -> Orientation {
    Orientation::from_reversed(vec![false, false, false])
}

/// A triangle joined by the bridge `e4` to two triangles sharing an edge;
/// directions as listed.
pub fn example2() -> MultiGraph {
    build(
        "bridged-triangles",
        7,
        &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5), (4, 6), (5, 6)],
    )
}

/// Spanning tree `{e1, e2, e4, e5, e6, e8}` of [`example2`].
pub const EXAMPLE2_TREE: [usize; 6] = [0, 1, 3, 4, 5, 7];

/// Reduction vertex `v3` of [`example2`].
pub const EXAMPLE2_V0: [usize; 1] = [2];

/// An abstract (but not geometric) dual of [`example2`], edges matched by
/// index and directed as listed.
pub fn example2_dual() -> MultiGraph {
    build(
        "bridged-triangles-dual",
        4,
        &[(1, 0), (0, 1), (1, 0), (1, 1), (2, 3), (3, 2), (2, 0), (0, 3), (3, 0)],
    )
}

/// The wheel on four spokes plus one rim diagonal: 5 vertices, 9 edges,
/// every face a triangle.
pub fn example3() -> MultiGraph {
    build(
        "wheel-with-chord",
        5,
        &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (2, 4), (4, 1), (0, 4), (3, 4)],
    )
}

pub fn complete(n: usize) -> MultiGraph {
    let edges: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    build(&format!("K{n}"), n, &edges)
}

pub fn complete_bipartite(a: usize, b: usize) -> MultiGraph {
    let edges: Vec<(usize, usize)> =
        (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j))).collect();
    build(&format!("K{a},{b}"), a + b, &edges)
}

pub fn cycle(n: usize) -> MultiGraph {
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    build(&format!("C{n}"), n, &edges)
}

pub fn path(n: usize) -> MultiGraph {
    let edges: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    build(&format!("P{n}"), n, &edges)
}

pub fn petersen() -> MultiGraph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    build("Petersen", 10, &edges)
}

/// Each edge of `g` replaced by `k` parallel copies (copies of edge `e`
/// occupy indices `k*e .. k*e + k`).
pub fn multiply_edges(g: &MultiGraph, k: usize) -> MultiGraph {
    let edges: Vec<(usize, usize)> =
        g.edges().iter().flat_map(|&e| std::iter::repeat(e).take(k)).collect();
    build(&format!("{}x{k}", g.name()), g.num_vertices(), &edges)
}
