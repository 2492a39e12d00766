//! Recovering graphs from unimodular images of matrices, trace descent on
//! superbases of the flow lattice, and abstract duals with certificates.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::budget::{Budget, Decision};
use crate::enumerate::forest_masks;
use crate::error::{Error, Result};
use crate::graph::{
    classify_edges, components, maximal_forest, maximal_forest_by_order, strip_loops_and_isthmuses,
    ForestCertificate, MultiGraph, Orientation,
};
use crate::laplacian::{
    flow_matrix, incidence, nonzero_columns, reduced_dual_laplacian, reduced_laplacian, superbase_matrix,
    DualLaplacianPair, ReductionSpec,
};
use crate::matrix::{IntMatrix, UnimodularWitness};
use crate::planarity::{kuratowski_oracle, KuratowskiEvidence, KuratowskiVerdict};

/// A directed graph whose incidence matrix is `C A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterOutcome {
    /// Edge `k` runs from the `-1` row to the `+1` row of column `k`; zero
    /// columns become loops at vertex 0.
    pub graph: MultiGraph,
    pub incidence: IntMatrix,
    pub trace: BigInt,
}

/// First column that is neither zero nor a single `+1` / `-1` pair.
pub fn first_non_incidence_column(a: &IntMatrix) -> Option<usize> {
    (0..a.cols()).find(|&j| {
        let col = a.column(j);
        let nz: Vec<&BigInt> = col.iter().filter(|x| !x.is_zero()).collect();
        !(nz.is_empty()
            || (nz.len() == 2 && nz.iter().all(|x| x.abs().is_one()) && (nz[0] + nz[1]).is_zero()))
    })
}

/// If `B = C A A^T C^T` has zero row sums and trace at most twice the number
/// of nonzero columns of `A`, then `C A` is an incidence matrix.
pub fn lemma_center_recover(a: &IntMatrix, c: &UnimodularWitness) -> Result<CenterOutcome> {
    let ca = c.matrix().mul(a)?;
    let b = ca.gram();
    if b.row_sums().iter().any(|s| !s.is_zero()) {
        return Err(Error::RowSumNonzero);
    }
    let bound = nonzero_columns(a);
    let trace = b.trace();
    if trace > BigInt::from(2 * bound) {
        return Err(Error::TraceTooLarge {
            trace: trace.to_string(),
            bound,
            column: first_non_incidence_column(&ca),
        });
    }
    debug_assert_eq!(trace, BigInt::from(2 * bound));
    let n = if ca.rows() == 0 && ca.cols() > 0 { 1 } else { ca.rows() };
    let mut edges = Vec::with_capacity(ca.cols());
    for j in 0..ca.cols() {
        let mut tail = None;
        let mut head = None;
        for i in 0..ca.rows() {
            let x = ca.get(i, j);
            if x.is_positive() {
                head = Some(i);
            } else if x.is_negative() {
                tail = Some(i);
            }
        }
        edges.push(match (tail, head) {
            (Some(t), Some(h)) => (t, h),
            _ => (0, 0),
        });
    }
    Ok(CenterOutcome { graph: MultiGraph::new(n, edges)?, incidence: ca, trace })
}

/// `f_i += s f_j` and `f_d -= s f_j` on a superbase; row sums stay zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SuperbaseMove {
    pub i: usize,
    pub j: usize,
    pub d: usize,
    pub s: i8,
}

impl SuperbaseMove {
    pub fn apply(&self, f_hat: &mut IntMatrix) {
        let s = BigInt::from(self.s);
        f_hat.add_row_multiple(self.i, self.j, &s);
        f_hat.add_row_multiple(self.d, self.j, &-s);
    }

    /// Change in `Tr(F̂ F̂^T)` given the Gram matrix before the move.
    pub fn trace_delta(&self, gram: &[Vec<i64>]) -> i64 {
        let s = self.s as i64;
        2 * gram[self.j][self.j] + 2 * s * (gram[self.i][self.j] - gram[self.d][self.j])
    }

    /// The induced `k x k` unimodular matrix acting on rows `1..=k`, with row 0
    /// read as minus the sum of the others.
    pub fn reduced_transform(&self, k: usize) -> IntMatrix {
        let mut e = IntMatrix::identity(k + 1);
        *e.get_mut(self.i, self.j) += self.s as i64;
        *e.get_mut(self.d, self.j) -= self.s as i64;
        let mut t = IntMatrix::zeros(k, k);
        for r in 1..=k {
            for c in 1..=k {
                t.set(r - 1, c - 1, e.get(r, c) - e.get(r, 0));
            }
        }
        t
    }

    pub fn all(rows: usize) -> Vec<SuperbaseMove> {
        let mut out = Vec::new();
        for i in 0..rows {
            for j in 0..rows {
                for d in 0..rows {
                    if i != j && j != d && i != d {
                        out.push(SuperbaseMove { i, j, d, s: 1 });
                        out.push(SuperbaseMove { i, j, d, s: -1 });
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperbaseState {
    pub f_hat: IntMatrix,
    pub gram: IntMatrix,
    pub trace: BigInt,
    /// Forest whose `F̂` the winning run started from.
    pub start_forest: Vec<usize>,
    /// Moves applied to that starting `F̂`, scrambles included.
    pub move_log: Vec<SuperbaseMove>,
    /// `2(m - i)`, the least possible trace.
    pub lower_bound: BigInt,
    pub reached_bound: bool,
    pub restarts: usize,
    pub budget_exhausted: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DescentOptions {
    pub max_restarts: usize,
    /// Random trace-neutral moves tried at each local minimum.
    pub plateau_moves: usize,
}

impl Default for DescentOptions {
    fn default() -> Self {
        DescentOptions { max_restarts: 64, plateau_moves: 8 }
    }
}

fn gram_i64(f_hat: &IntMatrix) -> Option<Vec<Vec<i64>>> {
    f_hat.gram().to_i64()
}

/// Steepest descent; ties go to the first move in `(i, j, d, s)` order.
fn descend(
    f_hat: &mut IntMatrix,
    log: &mut Vec<SuperbaseMove>,
    moves: &[SuperbaseMove],
    budget: &mut Budget,
) -> Result<()> {
    loop {
        budget.spend(moves.len() as u64 + 1)?;
        let Some(g) = gram_i64(f_hat) else { return Ok(()) };
        let mut best: Option<(i64, SuperbaseMove)> = None;
        for mv in moves {
            let d = mv.trace_delta(&g);
            if d < 0 && best.map_or(true, |(b, _)| d < b) {
                best = Some((d, *mv));
            }
        }
        match best {
            Some((_, mv)) => {
                mv.apply(f_hat);
                log.push(mv);
            }
            None => return Ok(()),
        }
    }
}

/// Greedy trace descent on `F̂(M)` with seeded restarts from other spanning
/// forests and random unimodular scrambles. Never fails: budget exhaustion
/// returns the best state found so far, flagged.
pub fn superbase_trace_minimize(
    g: &MultiGraph,
    o: &Orientation,
    f: &ForestCertificate,
    spec: &ReductionSpec,
    budget: &mut Budget,
    seed: u64,
) -> Result<SuperbaseState> {
    superbase_trace_minimize_with(g, o, f, spec, budget, seed, DescentOptions::default())
}

pub fn superbase_trace_minimize_with(
    g: &MultiGraph,
    o: &Orientation,
    f: &ForestCertificate,
    spec: &ReductionSpec,
    budget: &mut Budget,
    seed: u64,
    opts: DescentOptions,
) -> Result<SuperbaseState> {
    let start = superbase_matrix(g, o, f, spec)?;
    let rows = start.rows();
    let k = rows - 1;
    let isthmuses = classify_edges(g).isthmuses.len();
    let lower_bound = BigInt::from(2 * (g.num_edges() - isthmuses));
    let moves = SuperbaseMove::all(rows);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<SuperbaseState> = None;
    let mut exhausted = false;
    let mut restarts = 0;

    for run in 0..opts.max_restarts.max(1) {
        let (forest, mut f_hat) = if run == 0 {
            (f.forest_edges().to_vec(), start.clone())
        } else {
            let mut order: Vec<usize> = (0..g.num_edges()).collect();
            order.shuffle(&mut rng);
            let alt = maximal_forest_by_order(g, &order);
            (alt.forest_edges().to_vec(), superbase_matrix(g, o, &alt, spec)?)
        };
        let mut log = Vec::new();
        if run > 0 && rows >= 3 {
            for _ in 0..rng.gen_range(0..=k) {
                let mv = moves[rng.gen_range(0..moves.len())];
                mv.apply(&mut f_hat);
                log.push(mv);
            }
        }
        let mut result = descend(&mut f_hat, &mut log, &moves, budget);
        let mut plateau = 0;
        while result.is_ok() && plateau < opts.plateau_moves && f_hat.gram().trace() > lower_bound {
            let Some(gm) = gram_i64(&f_hat) else { break };
            let flat: Vec<SuperbaseMove> = moves.iter().copied().filter(|m| m.trace_delta(&gm) == 0).collect();
            if flat.is_empty() {
                break;
            }
            let mv = flat[rng.gen_range(0..flat.len())];
            mv.apply(&mut f_hat);
            log.push(mv);
            plateau += 1;
            result = descend(&mut f_hat, &mut log, &moves, budget);
        }
        restarts = run + 1;
        let gram = f_hat.gram();
        let trace = gram.trace();
        if best.as_ref().map_or(true, |b| trace < b.trace) {
            best = Some(SuperbaseState {
                reached_bound: trace == lower_bound,
                f_hat,
                gram,
                trace,
                start_forest: forest,
                move_log: log,
                lower_bound: lower_bound.clone(),
                restarts: 0,
                budget_exhausted: false,
            });
        }
        match result {
            Ok(()) => {}
            Err(Error::BudgetExceeded) => {
                exhausted = true;
                break;
            }
            Err(e) => return Err(e),
        }
        if best.as_ref().is_some_and(|b| b.reached_bound) {
            break;
        }
    }
    let mut best = best.expect("at least one run");
    best.restarts = restarts;
    best.budget_exhausted = exhausted;
    Ok(best)
}

/// Certificate that `dual_graph` is an abstract dual of the input graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCertificate {
    pub dual_graph: MultiGraph,
    pub dual_orientation: Orientation,
    /// `Z` with `Z A = N(dual)` where `A` is `flow_basis`.
    pub witness_z: UnimodularWitness,
    /// `[0; F(M)]` for the forest `forest`.
    pub flow_basis: IntMatrix,
    pub forest: ForestCertificate,
    /// `edge_bijection[e]` is the dual edge matched with edge `e`.
    pub edge_bijection: Vec<usize>,
    /// `Tr L(dual)`, equal to `2(m - i)`.
    pub trace: BigInt,
    /// Reduced dual Laplacian with the witness read off `Z`; its reduced
    /// matrix is `L_{0}(dual)`.
    pub dual_laplacian: DualLaplacianPair,
}

impl DualCertificate {
    /// Replays `Z A = N(dual)`, the trace, and the forest-complement check.
    pub fn check(&self, g: &MultiGraph) -> Result<bool> {
        let za = self.witness_z.matrix().mul(&self.flow_basis)?;
        let n = incidence(&self.dual_graph, &self.dual_orientation)?.select_columns(&self.edge_bijection);
        let isthmuses = classify_edges(g).isthmuses.len();
        let trace_ok = self.trace == BigInt::from(2 * (g.num_edges() - isthmuses))
            && crate::laplacian::laplacian(&self.dual_graph).trace() == self.trace;
        let lap_ok = self.dual_graph.num_vertices() == 0
            || reduced_laplacian(&self.dual_graph, &ReductionSpec::default_for(&self.dual_graph))?
                == self.dual_laplacian.reduced;
        Ok(za == n && trace_ok && lap_ok && verify_abstract_dual(g, &self.dual_graph, &self.edge_bijection)?.is_dual)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlanarityVerdict {
    Planar(Box<DualCertificate>),
    Nonplanar(KuratowskiEvidence),
    /// Neither a certificate nor a minor was found. `oracle_planar` records a
    /// completed minor search that found nothing.
    Unknown { best_trace: BigInt, lower_bound: BigInt, oracle_planar: bool },
}

impl PlanarityVerdict {
    pub fn decision(&self) -> Decision {
        match self {
            PlanarityVerdict::Planar(_) => Decision::Yes,
            PlanarityVerdict::Nonplanar(_) => Decision::No,
            PlanarityVerdict::Unknown { .. } => Decision::Unknown,
        }
    }
}

/// Trace descent first; a certificate is built only when the trace reaches
/// `2(m - i)`. Otherwise the minor search decides nonplanarity; search
/// failure alone never does.
pub fn decide_planarity(g: &MultiGraph, budget: &mut Budget, seed: u64) -> Result<PlanarityVerdict> {
    decide_planarity_with(g, budget, seed, DescentOptions::default())
}

pub fn decide_planarity_with(
    g: &MultiGraph,
    budget: &mut Budget,
    seed: u64,
    opts: DescentOptions,
) -> Result<PlanarityVerdict> {
    let steps = budget.remaining();
    let (h, kept) = strip_loops_and_isthmuses(g);
    let oh = Orientation::default_for(&h);
    let fh = maximal_forest(&h);
    let spec_h = ReductionSpec::default_for(&h);
    let mut descent_budget = Budget::new(steps);
    let state = superbase_trace_minimize_with(&h, &oh, &fh, &spec_h, &mut descent_budget, seed, opts)?;
    let _ = budget.spend(descent_budget.used().min(budget.remaining()));
    if state.reached_bound {
        let cert = certificate_from_superbase(g, &kept, &fh, &state.f_hat)?;
        return Ok(PlanarityVerdict::Planar(Box::new(cert)));
    }
    let mut oracle_budget = Budget::new(steps);
    let verdict = kuratowski_oracle(g, &mut oracle_budget);
    let _ = budget.spend(oracle_budget.used().min(budget.remaining()));
    Ok(match verdict {
        KuratowskiVerdict::Nonplanar(ev) => PlanarityVerdict::Nonplanar(ev),
        other => PlanarityVerdict::Unknown {
            best_trace: state.trace,
            lower_bound: state.lower_bound,
            oracle_planar: other == KuratowskiVerdict::Planar,
        },
    })
}

/// Lifts an optimal superbase of the stripped graph `h` to a certificate for
/// `g`: isthmus columns stay zero (dual loops) and each loop of `g` gets its
/// own row (a pendant dual edge).
fn certificate_from_superbase(
    g: &MultiGraph,
    kept: &[usize],
    fh: &ForestCertificate,
    f_hat_h: &IntMatrix,
) -> Result<DualCertificate> {
    let cls = classify_edges(g);
    let mut forest: Vec<usize> = fh.forest_edges().iter().map(|&e| kept[e]).collect();
    forest.extend(&cls.isthmuses);
    forest.sort_unstable();
    let fg = ForestCertificate::new(g, &forest)?;
    let og = Orientation::default_for(g);
    let spec_g = ReductionSpec::default_for(g);
    let flow = flow_matrix(g, &og, &fg, &spec_g)?;
    let k = flow.rows();
    // Basis change on h's cotree rows, read off the cotree columns of F(M).
    let cot_h = fh.cotree_edges();
    let pos = |e_g: usize| fg.cotree_edges().binary_search(&e_g).expect("h cotree edge is a g cotree edge");
    let mut u = IntMatrix::identity(k);
    for (a, _) in cot_h.iter().enumerate() {
        for &eb in cot_h.iter() {
            u.set(pos(kept[cot_h[a]]), pos(kept[eb]), -f_hat_h.get(a + 1, eb));
        }
    }
    let mut z = IntMatrix::identity(k + 1);
    let sums = u.col_sums();
    for c in 0..k {
        z.set(0, c + 1, -&sums[c]);
        for r in 0..k {
            z.set(r + 1, c + 1, u.get(r, c).clone());
        }
    }
    let witness_z = UnimodularWitness::new(z)?;
    let flow_basis = IntMatrix::zeros(1, g.num_edges()).vstack(&flow)?;
    let outcome = lemma_center_recover(&flow_basis, &witness_z)?;
    let dual_laplacian = reduced_dual_laplacian(g, &og, &fg, &spec_g, Some(&u))?;
    let cert = DualCertificate {
        dual_orientation: Orientation::default_for(&outcome.graph),
        dual_graph: outcome.graph,
        witness_z,
        flow_basis,
        forest: fg,
        edge_bijection: (0..g.num_edges()).collect(),
        trace: outcome.trace,
        dual_laplacian,
    };
    Ok(cert)
}

/// A certified abstract dual, or an error when none can be produced.
pub fn construct_abstract_dual(g: &MultiGraph, budget: &mut Budget, seed: u64) -> Result<DualCertificate> {
    match decide_planarity(g, budget, seed)? {
        PlanarityVerdict::Planar(c) => Ok(*c),
        PlanarityVerdict::Nonplanar(_) => Err(Error::NonplanarInput),
        PlanarityVerdict::Unknown { .. } => Err(Error::BudgetExceeded),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCheck {
    pub is_dual: bool,
    pub forests1: usize,
    pub forests2: usize,
    /// A maximal forest of `g2` has `m - (n1 - c1)` edges.
    pub forest_size_ok: bool,
}

/// Checks that `beta` carries maximal forests of `g1` exactly onto
/// complements of maximal forests of `g2`.
pub fn verify_abstract_dual(g1: &MultiGraph, g2: &MultiGraph, beta: &[usize]) -> Result<DualCheck> {
    let m = g1.num_edges();
    if g2.num_edges() != m || beta.len() != m {
        return Err(Error::ShapeMismatch(format!("{} vs {} edges, bijection of length {}", m, g2.num_edges(), beta.len())));
    }
    let mut hit = vec![false; m];
    for &b in beta {
        if b >= m || hit[b] {
            return Err(Error::ShapeMismatch("edge map is not a bijection".into()));
        }
        hit[b] = true;
    }
    const CAP: usize = 1 << 20;
    let f1 = forest_masks(g1, CAP)?;
    let mut f2 = forest_masks(g2, CAP)?;
    f2.sort_unstable();
    let full: u64 = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let mut images: Vec<u64> = f1
        .iter()
        .map(|&mask| {
            let mapped = (0..m).filter(|&e| mask >> e & 1 == 1).fold(0u64, |a, e| a | (1 << beta[e]));
            full & !mapped
        })
        .collect();
    images.sort_unstable();
    let rank1 = g1.num_vertices() - components(g1).count();
    let rank2 = g2.num_vertices() - components(g2).count();
    let forest_size_ok = rank2 == m - rank1;
    Ok(DualCheck { is_dual: forest_size_ok && images == f2, forests1: f1.len(), forests2: f2.len(), forest_size_ok })
}
