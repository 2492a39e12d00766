//! Laplacians, incidence matrices, the fundamental cut block `C(M)`, the
//! fundamental circuit matrix `F(M)` and dual Laplacians.
//!
//! Column permutations are never materialized: every edge-indexed matrix
//! keeps columns in edge order, and the cut block carries explicit row and
//! column edge lists.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{components, ForestCertificate, MultiGraph, Orientation};
use crate::matrix::{inverse_unimodular, IntMatrix, UnimodularWitness};

/// A set `V0` holding exactly one vertex of every connected component.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReductionSpec {
    v0: Vec<usize>,
    kept: Vec<usize>,
}

impl ReductionSpec {
    pub fn new(g: &MultiGraph, v0: &[usize]) -> Result<Self> {
        let comps = components(g);
        let mut hits = vec![0usize; comps.count()];
        for &v in v0 {
            if v >= g.num_vertices() {
                return Err(Error::InvalidReductionSpec(format!("vertex {v} out of range")));
            }
            hits[comps.label[v]] += 1;
        }
        if let Some(c) = hits.iter().position(|&h| h != 1) {
            return Err(Error::InvalidReductionSpec(format!(
                "component containing vertex {} has {} chosen vertices",
                comps.classes[c][0], hits[c]
            )));
        }
        let mut v0 = v0.to_vec();
        v0.sort_unstable();
        let kept = (0..g.num_vertices()).filter(|v| v0.binary_search(v).is_err()).collect();
        Ok(ReductionSpec { v0, kept })
    }

    /// Smallest vertex of each component.
    pub fn default_for(g: &MultiGraph) -> Self {
        let v0: Vec<usize> = components(g).classes.iter().map(|c| c[0]).collect();
        Self::new(g, &v0).expect("one vertex per component")
    }

    /// Largest vertex of each component.
    pub fn last_for(g: &MultiGraph) -> Self {
        let v0: Vec<usize> = components(g).classes.iter().map(|c| *c.last().unwrap()).collect();
        Self::new(g, &v0).expect("one vertex per component")
    }

    pub fn v0(&self) -> &[usize] {
        &self.v0
    }

    /// Vertices that index rows of reduced matrices, ascending.
    pub fn kept_vertices(&self) -> &[usize] {
        &self.kept
    }

    fn check(&self, g: &MultiGraph) -> Result<()> {
        ReductionSpec::new(g, &self.v0).map(|_| ())
    }
}

pub fn laplacian(g: &MultiGraph) -> IntMatrix {
    let n = g.num_vertices();
    let mut l = IntMatrix::zeros(n, n);
    let one = BigInt::one();
    for &(u, v) in g.edges() {
        if u == v {
            continue;
        }
        *l.get_mut(u, v) -= &one;
        *l.get_mut(v, u) -= &one;
        *l.get_mut(u, u) += &one;
        *l.get_mut(v, v) += &one;
    }
    l
}

pub fn reduced_laplacian(g: &MultiGraph, spec: &ReductionSpec) -> Result<IntMatrix> {
    spec.check(g)?;
    let k = spec.kept_vertices();
    Ok(laplacian(g).submatrix(k, k))
}

/// `n x m` incidence matrix: `-1` at the tail, `+1` at the head, loop
/// columns zero.
pub fn incidence(g: &MultiGraph, o: &Orientation) -> Result<IntMatrix> {
    o.check(g)?;
    let mut n = IntMatrix::zeros(g.num_vertices(), g.num_edges());
    for e in 0..g.num_edges() {
        if g.is_loop(e) {
            continue;
        }
        let (t, h) = o.ends(g, e);
        n.set(t, e, BigInt::from(-1));
        n.set(h, e, BigInt::one());
    }
    Ok(n)
}

pub fn reduced_incidence(g: &MultiGraph, o: &Orientation, spec: &ReductionSpec) -> Result<IntMatrix> {
    spec.check(g)?;
    Ok(incidence(g, o)?.select_rows(spec.kept_vertices()))
}

/// `C(M) = N_{V0}(M)^{-1} N_{V0}(G - E(M))`, rows indexed by forest edges
/// and columns by cotree edges (both ascending).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutBlock {
    pub matrix: IntMatrix,
    pub forest_edges: Vec<usize>,
    pub cotree_edges: Vec<usize>,
}

impl CutBlock {
    /// `I + C C^T`, a Gram matrix of the cut lattice.
    pub fn cut_gram(&self) -> IntMatrix {
        IntMatrix::identity(self.matrix.rows()).add(&self.matrix.gram()).expect("square")
    }

    /// `I' + C^T C`, the base reduced dual Laplacian.
    pub fn flow_gram(&self) -> IntMatrix {
        IntMatrix::identity(self.matrix.cols()).add(&self.matrix.transpose().gram()).expect("square")
    }

    /// `(I | C) P_M`: rows are fundamental cuts, columns in edge order.
    pub fn fundamental_cut_matrix(&self) -> IntMatrix {
        let r = self.forest_edges.len();
        let m = r + self.cotree_edges.len();
        let mut out = IntMatrix::zeros(r, m);
        for i in 0..r {
            out.set(i, self.forest_edges[i], BigInt::one());
            for (j, &e) in self.cotree_edges.iter().enumerate() {
                out.set(i, e, self.matrix.get(i, j).clone());
            }
        }
        out
    }
}

pub fn cut_block(
    g: &MultiGraph,
    o: &Orientation,
    f: &ForestCertificate,
    spec: &ReductionSpec,
) -> Result<CutBlock> {
    f.check(g)?;
    let n_red = reduced_incidence(g, o, spec)?;
    let forest_part = n_red.select_columns(f.forest_edges());
    let cotree_part = n_red.select_columns(f.cotree_edges());
    let inv = inverse_unimodular(&forest_part)?;
    Ok(CutBlock {
        matrix: inv.mul(&cotree_part)?,
        forest_edges: f.forest_edges().to_vec(),
        cotree_edges: f.cotree_edges().to_vec(),
    })
}

/// `F(M) = (C^T | -I') P_M`, one fundamental circuit per cotree edge
/// (ascending), columns in edge order.
pub fn flow_matrix(g: &MultiGraph, o: &Orientation, f: &ForestCertificate, spec: &ReductionSpec) -> Result<IntMatrix> {
    Ok(flow_matrix_from_cut_block(&cut_block(g, o, f, spec)?))
}

pub fn flow_matrix_from_cut_block(cb: &CutBlock) -> IntMatrix {
    let k = cb.cotree_edges.len();
    let m = k + cb.forest_edges.len();
    let mut out = IntMatrix::zeros(k, m);
    for (r, &e) in cb.cotree_edges.iter().enumerate() {
        out.set(r, e, BigInt::from(-1));
        for (i, &fe) in cb.forest_edges.iter().enumerate() {
            out.set(r, fe, cb.matrix.get(i, r).clone());
        }
    }
    out
}

/// `F̂(M)`: `F(M)` with the negated row sum adjoined as row 0.
pub fn superbase_matrix(
    g: &MultiGraph,
    o: &Orientation,
    f: &ForestCertificate,
    spec: &ReductionSpec,
) -> Result<IntMatrix> {
    Ok(adjoin_negated_sum(&flow_matrix(g, o, f, spec)?))
}

pub fn adjoin_negated_sum(f: &IntMatrix) -> IntMatrix {
    let sums: Vec<BigInt> = f.col_sums().into_iter().map(|s| -s).collect();
    IntMatrix::from_vec(1, f.cols(), sums).expect("row").vstack(f).expect("same width")
}

/// Where the zero-sum border goes when enlarging a reduced matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BorderPosition {
    First,
    Last,
}

/// Adjoins one row and column so that all row and column sums vanish.
pub fn border_zero_sum(a: &IntMatrix, pos: BorderPosition) -> IntMatrix {
    let k = a.rows();
    let row_sums = a.row_sums();
    let col_sums = a.col_sums();
    let total: BigInt = row_sums.iter().sum();
    let mut out = IntMatrix::zeros(k + 1, k + 1);
    let off = match pos {
        BorderPosition::First => 1,
        BorderPosition::Last => 0,
    };
    let b = match pos {
        BorderPosition::First => 0,
        BorderPosition::Last => k,
    };
    for i in 0..k {
        for j in 0..k {
            out.set(i + off, j + off, a.get(i, j).clone());
        }
        out.set(i + off, b, -&row_sums[i]);
        out.set(b, i + off, -&col_sums[i]);
    }
    out.set(b, b, total);
    out
}

/// A reduced dual Laplacian `W (I' + C^T C) W^T` with its zero-sum
/// enlargement (border last) and the generating witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualLaplacianPair {
    pub reduced: IntMatrix,
    pub unreduced: IntMatrix,
    pub witness: UnimodularWitness,
    pub base: IntMatrix,
}

pub fn reduced_dual_laplacian(
    g: &MultiGraph,
    o: &Orientation,
    f: &ForestCertificate,
    spec: &ReductionSpec,
    u: Option<&IntMatrix>,
) -> Result<DualLaplacianPair> {
    let base = cut_block(g, o, f, spec)?.flow_gram();
    let witness = match u {
        Some(u) => {
            if u.shape() != base.shape() {
                return Err(Error::ShapeMismatch(format!(
                    "witness is {}x{}, dual Laplacian is {}x{}",
                    u.rows(),
                    u.cols(),
                    base.rows(),
                    base.cols()
                )));
            }
            UnimodularWitness::new(u.clone())?
        }
        None => UnimodularWitness::identity(base.rows()),
    };
    let reduced = base.congruent_by(witness.matrix())?;
    let unreduced = border_zero_sum(&reduced, BorderPosition::Last);
    Ok(DualLaplacianPair { reduced, unreduced, witness, base })
}

/// `(1 -1^T; 0 I)`: the bordering transform carrying `diag(0, A)` to the
/// zero-sum enlargement of `A` (border first).
pub fn border_transform(k: usize) -> IntMatrix {
    let mut w = IntMatrix::identity(k + 1);
    for j in 1..=k {
        w.set(0, j, BigInt::from(-1));
    }
    w
}

/// `(1 1^T; 0 I)`, inverse of [`border_transform`].
pub fn unborder_transform(k: usize) -> IntMatrix {
    let mut y = IntMatrix::identity(k + 1);
    for j in 1..=k {
        y.set(0, j, BigInt::one());
    }
    y
}

/// Number of nonzero columns.
pub fn nonzero_columns(a: &IntMatrix) -> usize {
    (0..a.cols()).filter(|&j| (0..a.rows()).any(|i| !a.get(i, j).is_zero())).count()
}
