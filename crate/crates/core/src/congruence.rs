//! Congruence over the integers, row equivalence, and the four-way
//! equivalence between Laplacian congruence, incidence row equivalence and
//! 2-isomorphism.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::budget::{Budget, Decision};
use crate::duality::{lemma_center_recover, CenterOutcome};
use crate::enumerate::decide_2_isomorphism_bruteforce;
use crate::error::{Error, Result};
use crate::graph::{components, MultiGraph, Orientation};
use crate::laplacian::{border_transform, incidence, laplacian, reduced_incidence, reduced_laplacian, unborder_transform, ReductionSpec};
use crate::lattice::{find_isometry, split_kernel, IsometrySearch};
use crate::matrix::{det_bareiss, hermite_normal_form, inertia, rank, smith_normal_form, Inertia, IntMatrix, UnimodularWitness};

/// The cheap congruence invariants, in the order the prefilter compares them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceInvariants {
    pub size: usize,
    pub rank: usize,
    #[serde(with = "crate::json::bigint_str")]
    pub det: BigInt,
    pub inertia: Inertia,
    #[serde(with = "crate::json::bigint_vec_str")]
    pub snf: Vec<BigInt>,
}

pub fn congruence_invariants(a: &IntMatrix) -> Result<CongruenceInvariants> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    if !a.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    Ok(CongruenceInvariants {
        size: a.rows(),
        rank: rank(a),
        det: det_bareiss(a)?,
        inertia: inertia(a)?,
        snf: smith_normal_form(a).diag,
    })
}

/// Which invariant told two forms apart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeparatingInvariant {
    Size { a: usize, b: usize },
    Rank { a: usize, b: usize },
    Det {
        #[serde(with = "crate::json::bigint_str")]
        a: BigInt,
        #[serde(with = "crate::json::bigint_str")]
        b: BigInt,
    },
    Inertia { a: Inertia, b: Inertia },
    Snf {
        #[serde(with = "crate::json::bigint_vec_str")]
        a: Vec<BigInt>,
        #[serde(with = "crate::json::bigint_vec_str")]
        b: Vec<BigInt>,
    },
    /// Counts of lattice vectors of norm `1, 2, ...` on the definite parts.
    Theta { a: Vec<usize>, b: Vec<usize> },
    /// Exhaustive isometry search on the definite parts found nothing.
    IsometrySearch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CongruenceStatus {
    Congruent,
    NotCongruent,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceVerdict {
    pub status: CongruenceStatus,
    /// `U` with `U A U^T = B`.
    pub witness: Option<UnimodularWitness>,
    pub separating_invariant: Option<SeparatingInvariant>,
}

impl CongruenceVerdict {
    fn congruent(u: IntMatrix) -> Self {
        CongruenceVerdict {
            status: CongruenceStatus::Congruent,
            witness: Some(UnimodularWitness::new_unchecked(u)),
            separating_invariant: None,
        }
    }

    fn separated(s: SeparatingInvariant) -> Self {
        CongruenceVerdict { status: CongruenceStatus::NotCongruent, witness: None, separating_invariant: Some(s) }
    }

    fn unknown() -> Self {
        CongruenceVerdict { status: CongruenceStatus::Unknown, witness: None, separating_invariant: None }
    }

    pub fn decision(&self) -> Decision {
        match self.status {
            CongruenceStatus::Congruent => Decision::Yes,
            CongruenceStatus::NotCongruent => Decision::No,
            CongruenceStatus::Unknown => Decision::Unknown,
        }
    }
}

fn separating(ia: &CongruenceInvariants, ib: &CongruenceInvariants) -> Option<SeparatingInvariant> {
    if ia.size != ib.size {
        return Some(SeparatingInvariant::Size { a: ia.size, b: ib.size });
    }
    if ia.rank != ib.rank {
        return Some(SeparatingInvariant::Rank { a: ia.rank, b: ib.rank });
    }
    if ia.det != ib.det {
        return Some(SeparatingInvariant::Det { a: ia.det.clone(), b: ib.det.clone() });
    }
    if ia.inertia != ib.inertia {
        return Some(SeparatingInvariant::Inertia { a: ia.inertia, b: ib.inertia });
    }
    if ia.snf != ib.snf {
        return Some(SeparatingInvariant::Snf { a: ia.snf.clone(), b: ib.snf.clone() });
    }
    None
}

/// Decides whether `U a U^T = b` for some unimodular `U`.
///
/// Semidefinite inputs are decided completely: the kernel is split off and
/// the definite parts are compared by exhaustive short-vector isometry
/// search. Indefinite inputs fall back to a bounded bidirectional search
/// over elementary congruences and may come back `Unknown`.
pub fn decide_congruence(a: &IntMatrix, b: &IntMatrix, budget: &mut Budget) -> Result<CongruenceVerdict> {
    let ia = congruence_invariants(a)?;
    let ib = congruence_invariants(b)?;
    if let Some(s) = separating(&ia, &ib) {
        return Ok(CongruenceVerdict::separated(s));
    }
    if a == b {
        return Ok(CongruenceVerdict::congruent(IntMatrix::identity(a.rows())));
    }
    let verdict = if ia.inertia.negative == 0 {
        semidefinite(a, b, budget)?
    } else if ia.inertia.positive == 0 {
        semidefinite(&a.neg(), &b.neg(), budget)?
    } else {
        match move_search(a, b, budget) {
            Ok(Some(u)) => CongruenceVerdict::congruent(u),
            Ok(None) | Err(Error::BudgetExceeded) => CongruenceVerdict::unknown(),
            Err(e) => return Err(e),
        }
    };
    if let Some(w) = &verdict.witness {
        assert_eq!(&a.congruent_by(w.matrix())?, b, "congruence witness failed to replay");
    }
    Ok(verdict)
}

fn semidefinite(a: &IntMatrix, b: &IntMatrix, budget: &mut Budget) -> Result<CongruenceVerdict> {
    let (va, pa) = split_kernel(a);
    let (vb, pb) = split_kernel(b);
    let w = match find_isometry(&pa, &pb, budget) {
        Ok(IsometrySearch::Found(w)) => w,
        Ok(IsometrySearch::ThetaDiffers { a, b }) => {
            return Ok(CongruenceVerdict::separated(SeparatingInvariant::Theta { a, b }))
        }
        Ok(IsometrySearch::None) => return Ok(CongruenceVerdict::separated(SeparatingInvariant::IsometrySearch)),
        Err(Error::BudgetExceeded) => return Ok(CongruenceVerdict::unknown()),
        Err(e) => return Err(e),
    };
    let lift = w.direct_sum(&IntMatrix::identity(a.rows() - pa.rows()));
    let vb_inv = UnimodularWitness::new_unchecked(vb).inverse();
    Ok(CongruenceVerdict::congruent(vb_inv.mul(&lift)?.mul(&va)?))
}

/// One elementary congruence on `k x k` matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ElementaryMove {
    /// Row and column `i` gain `s` times row and column `j`.
    Transvection { i: usize, j: usize, s: i8 },
    /// Row and column `i` change sign.
    Negate { i: usize },
    /// Rows and columns `i` and `j` trade places.
    Swap { i: usize, j: usize },
}

impl ElementaryMove {
    pub fn all(k: usize) -> Vec<ElementaryMove> {
        let mut out = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    out.push(ElementaryMove::Transvection { i, j, s: 1 });
                    out.push(ElementaryMove::Transvection { i, j, s: -1 });
                }
            }
            out.push(ElementaryMove::Negate { i });
            for j in i + 1..k {
                out.push(ElementaryMove::Swap { i, j });
            }
        }
        out
    }

    /// The elementary unimodular matrix `E`; the move sends `A` to `E A E^T`.
    pub fn matrix(&self, k: usize) -> IntMatrix {
        let mut e = IntMatrix::identity(k);
        match *self {
            ElementaryMove::Transvection { i, j, s } => e.set(i, j, BigInt::from(s)),
            ElementaryMove::Negate { i } => e.set(i, i, BigInt::from(-1)),
            ElementaryMove::Swap { i, j } => {
                e.swap_rows(i, j);
            }
        }
        e
    }

    /// Applies the move to rows of `u`, keeping `E u`.
    pub fn apply_rows(&self, u: &mut IntMatrix) {
        match *self {
            ElementaryMove::Transvection { i, j, s } => u.add_row_multiple(i, j, &BigInt::from(s)),
            ElementaryMove::Negate { i } => u.negate_row(i),
            ElementaryMove::Swap { i, j } => u.swap_rows(i, j),
        }
    }

    /// `E A E^T` without forming `E`.
    pub fn apply_congruence(&self, a: &IntMatrix) -> IntMatrix {
        let mut out = a.clone();
        match *self {
            ElementaryMove::Transvection { i, j, s } => {
                let s = BigInt::from(s);
                out.add_row_multiple(i, j, &s);
                out.add_col_multiple(i, j, &s);
            }
            ElementaryMove::Negate { i } => {
                out.negate_row(i);
                out.negate_col(i);
            }
            ElementaryMove::Swap { i, j } => {
                out.swap_rows(i, j);
                out.swap_cols(i, j);
            }
        }
        out
    }
}

/// Bidirectional breadth-first search over elementary congruences, with
/// entries capped so the reachable set stays finite. `Ok(None)` means the
/// capped graph was exhausted, which is not a proof of non-congruence.
fn move_search(a: &IntMatrix, b: &IntMatrix, budget: &mut Budget) -> Result<Option<IntMatrix>> {
    let k = a.rows();
    let cap = a.max_abs().max(b.max_abs()) * 2 + BigInt::one();
    let moves = ElementaryMove::all(k);
    let mut seen: [HashMap<IntMatrix, IntMatrix>; 2] = [HashMap::new(), HashMap::new()];
    let mut frontier: [VecDeque<IntMatrix>; 2] = [VecDeque::new(), VecDeque::new()];
    for (side, start) in [a, b].into_iter().enumerate() {
        seen[side].insert(start.clone(), IntMatrix::identity(k));
        frontier[side].push_back(start.clone());
    }
    while !frontier[0].is_empty() || !frontier[1].is_empty() {
        let side = if frontier[1].is_empty() || (!frontier[0].is_empty() && frontier[0].len() <= frontier[1].len()) {
            0
        } else {
            1
        };
        let level = frontier[side].len();
        for _ in 0..level {
            let state = frontier[side].pop_front().expect("level size");
            let u = seen[side][&state].clone();
            for mv in &moves {
                budget.tick()?;
                let next = mv.apply_congruence(&state);
                if next.max_abs() > cap || seen[side].contains_key(&next) {
                    continue;
                }
                let mut nu = u.clone();
                mv.apply_rows(&mut nu);
                if let Some(other) = seen[1 - side].get(&next) {
                    // ua a ua^T = next = ub b ub^T
                    let (ua, ub) = if side == 0 { (nu, other.clone()) } else { (other.clone(), nu) };
                    let ub_inv = UnimodularWitness::new_unchecked(ub).inverse();
                    return Ok(Some(ub_inv.mul(&ua)?));
                }
                seen[side].insert(next.clone(), nu);
                frontier[side].push_back(next);
            }
        }
    }
    Ok(None)
}

/// `W` with `W a = b`, if the two matrices are strictly row equivalent.
pub fn strict_row_equivalence(a: &IntMatrix, b: &IntMatrix) -> Result<Option<UnimodularWitness>> {
    if a.cols() != b.cols() {
        return Err(Error::ShapeMismatch(format!("{} vs {} columns", a.cols(), b.cols())));
    }
    if a.rows() != b.rows() {
        return Ok(None);
    }
    let (ha, ua) = hermite_normal_form(a);
    let (hb, ub) = hermite_normal_form(b);
    if ha != hb {
        return Ok(None);
    }
    let w = ub.inverse().mul(ua.matrix())?;
    debug_assert_eq!(&w.mul(a)?, b);
    Ok(Some(UnimodularWitness::new_unchecked(w)))
}

/// Loose row equivalence: both matrices are padded with zero rows to a common
/// height, then compared strictly. The witness acts on the padded matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LooseEquivalence {
    pub equivalent: bool,
    pub padded_rows: usize,
    pub witness: Option<UnimodularWitness>,
}

pub fn loose_row_equivalence(a: &IntMatrix, b: &IntMatrix) -> Result<LooseEquivalence> {
    if a.cols() != b.cols() {
        return Err(Error::ShapeMismatch(format!("{} vs {} columns", a.cols(), b.cols())));
    }
    let r = a.rows().max(b.rows());
    let pad = |x: &IntMatrix| x.vstack(&IntMatrix::zeros(r - x.rows(), x.cols())).expect("same width");
    let witness = strict_row_equivalence(&pad(a), &pad(b))?;
    Ok(LooseEquivalence { equivalent: witness.is_some(), padded_rows: r, witness })
}

/// Nonzero rows of the HNF: a basis of the row lattice.
pub fn row_lattice_basis(a: &IntMatrix) -> IntMatrix {
    let (h, _) = hermite_normal_form(a);
    let r = (0..h.rows()).take_while(|&i| h.row(i).iter().any(|x| !x.is_zero())).count();
    h.select_rows(&(0..r).collect::<Vec<_>>())
}

fn adjugate(m: &IntMatrix) -> Result<IntMatrix> {
    let k = m.rows();
    let mut adj = IntMatrix::zeros(k, k);
    if k == 1 {
        adj.set(0, 0, BigInt::one());
        return Ok(adj);
    }
    for i in 0..k {
        for j in 0..k {
            let rows: Vec<usize> = (0..k).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..k).filter(|&c| c != i).collect();
            let minor = det_bareiss(&m.submatrix(&rows, &cols))?;
            adj.set(i, j, if (i + j) % 2 == 0 { minor } else { -minor });
        }
    }
    Ok(adj)
}

/// `a^T adj(a a^T) a`: `det(a a^T)` times the orthogonal projector onto the
/// row space. Unchanged under left multiplication by a unimodular matrix.
pub fn scaled_row_projector(a: &IntMatrix) -> Result<IntMatrix> {
    let g = a.gram();
    a.transpose().mul(&adjugate(&g)?)?.mul(a)
}

/// A signed column matching: column `i` of `a` is compared with
/// `sign[i] * column beta[i]` of `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedMatching {
    pub beta: Vec<usize>,
    pub flip: Vec<bool>,
}

impl SignedMatching {
    /// Columns of `b` rearranged and signed to line up with `a`.
    pub fn apply(&self, b: &IntMatrix) -> IntMatrix {
        let mut out = b.select_columns(&self.beta);
        for (i, &f) in self.flip.iter().enumerate() {
            if f {
                out.negate_col(i);
            }
        }
        out
    }

    /// Orientation of the second graph realising the sign flips.
    pub fn orientation(&self, base: &Orientation) -> Orientation {
        let mut bits = base.reversed_bits().to_vec();
        for (i, &f) in self.flip.iter().enumerate() {
            bits[self.beta[i]] ^= f;
        }
        Orientation::from_reversed(bits)
    }
}

/// Searches signed column matchings under which the row spaces of two full
/// row rank matrices coincide, accepting the first one `accept` approves.
/// Pruned by the scaled row projector, whose entries must agree up to the
/// column signs.
pub fn signed_column_search(
    a: &IntMatrix,
    b: &IntMatrix,
    accept: &dyn Fn(&SignedMatching) -> bool,
    budget: &mut Budget,
) -> Result<Option<SignedMatching>> {
    if a.cols() != b.cols() || a.rows() != b.rows() {
        return Ok(None);
    }
    if det_bareiss(&a.gram())? != det_bareiss(&b.gram())? {
        return Ok(None);
    }
    let m = a.cols();
    let pa = scaled_row_projector(a)?;
    let pb = scaled_row_projector(b)?;
    let fingerprint = |p: &IntMatrix, i: usize| {
        let mut f: Vec<BigInt> = p.row(i).iter().map(|x| x.abs()).collect();
        f.sort();
        (p.get(i, i).clone(), f)
    };
    let fa: Vec<_> = (0..m).map(|i| fingerprint(&pa, i)).collect();
    let fb: Vec<_> = (0..m).map(|i| fingerprint(&pb, i)).collect();
    {
        let mut sa = fa.clone();
        let mut sb = fb.clone();
        sa.sort();
        sb.sort();
        if sa != sb {
            return Ok(None);
        }
    }
    let mut state = SignedMatching { beta: Vec::with_capacity(m), flip: Vec::with_capacity(m) };
    let mut used = vec![false; m];
    let ctx = MatchCtx { pa: &pa, pb: &pb, fa: &fa, fb: &fb, accept };
    if ctx.extend(&mut state, &mut used, budget)? {
        return Ok(Some(state));
    }
    Ok(None)
}

type Fingerprint = (BigInt, Vec<BigInt>);

struct MatchCtx<'a> {
    pa: &'a IntMatrix,
    pb: &'a IntMatrix,
    fa: &'a [Fingerprint],
    fb: &'a [Fingerprint],
    accept: &'a dyn Fn(&SignedMatching) -> bool,
}

impl MatchCtx<'_> {
    fn extend(&self, st: &mut SignedMatching, used: &mut [bool], budget: &mut Budget) -> Result<bool> {
        let i = st.beta.len();
        let m = used.len();
        if i == m {
            return Ok((self.accept)(st));
        }
        for j in 0..m {
            if used[j] || self.fa[i] != self.fb[j] {
                continue;
            }
            budget.tick()?;
            // The first earlier column with a nonzero projector entry fixes the sign.
            let mut forced: Option<bool> = None;
            for p in 0..i {
                let x = self.pa.get(i, p);
                if !x.is_zero() {
                    let y = self.pb.get(j, st.beta[p]);
                    let same = if st.flip[p] { -y } else { y.clone() };
                    forced = Some(&same != x);
                    break;
                }
            }
            let signs: &[bool] = match forced {
                Some(true) => &[true],
                Some(false) => &[false],
                None => &[false, true],
            };
            for &s in signs {
                let ok = (0..i).all(|p| {
                    let y = self.pb.get(j, st.beta[p]);
                    let y = if s != st.flip[p] { -y } else { y.clone() };
                    &y == self.pa.get(i, p)
                });
                if !ok {
                    continue;
                }
                st.beta.push(j);
                st.flip.push(s);
                used[j] = true;
                if self.extend(st, used, budget)? {
                    return Ok(true);
                }
                used[j] = false;
                st.beta.pop();
                st.flip.pop();
            }
        }
        Ok(false)
    }
}

/// The explicit matrix used to show `L(G)` congruent to `L_{V0}(G)` padded
/// by zeros: entry `(v, w)` is 1 for `v` in `V0`, `w != v` in its component.
pub fn reduction_transform(g: &MultiGraph, spec: &ReductionSpec) -> IntMatrix {
    let comps = components(g);
    let mut u = IntMatrix::identity(g.num_vertices());
    for &v in spec.v0() {
        for &w in &comps.classes[comps.label[v]] {
            if w != v {
                u.set(v, w, BigInt::one());
            }
        }
    }
    u
}

/// The constructive direction from Laplacian congruence to incidence row
/// equivalence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructivePath {
    /// Edge map from the first graph to the second.
    pub beta: Vec<usize>,
    pub orientation1: Orientation,
    pub orientation2: Orientation,
    /// `W` with `W N_{V01}(G1) = N_{V02}(G2)` once columns are matched by `beta`.
    pub witness: UnimodularWitness,
    /// The recovered directed graph on the identified vertex set.
    pub recovered: MultiGraph,
    pub strictly_row_equivalent: bool,
}

/// Unreduced form: `L(G1) ~ L(G2)` against 2-isomorphism with equal vertex
/// and component counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnreducedReport {
    pub laplacians_congruent: Decision,
    pub same_vertices_and_components: bool,
    /// `rank L(G) = n - c` holds for both graphs.
    pub rank_identity: bool,
    /// The explicit reduction transform brings `L(G)` to `L_{V0}(G)` plus zeros, for both.
    pub reduction_identity: bool,
    pub agrees: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyXReport {
    pub reduced_laplacians_congruent: Decision,
    pub reduced_incidences_strictly_equivalent: Decision,
    pub incidences_loosely_equivalent: Decision,
    pub two_isomorphic: Decision,
    pub congruence: CongruenceVerdict,
    pub strict_matching: Option<SignedMatching>,
    pub loose_matching: Option<SignedMatching>,
    pub two_isomorphism: Option<Vec<usize>>,
    pub constructive: Option<ConstructivePath>,
    pub unreduced: UnreducedReport,
    /// All decided conditions agree, and so does the unreduced form.
    pub consistent: bool,
}

impl PropertyXReport {
    pub fn conditions(&self) -> [Decision; 4] {
        [
            self.reduced_laplacians_congruent,
            self.reduced_incidences_strictly_equivalent,
            self.incidences_loosely_equivalent,
            self.two_isomorphic,
        ]
    }
}

fn decided<T>(r: Result<Option<T>>) -> Result<(Decision, Option<T>)> {
    match r {
        Ok(Some(x)) => Ok((Decision::Yes, Some(x))),
        Ok(None) => Ok((Decision::No, None)),
        Err(Error::BudgetExceeded) | Err(Error::CapExceeded { .. }) => Ok((Decision::Unknown, None)),
        Err(e) => Err(e),
    }
}

pub fn property_x_report(g1: &MultiGraph, g2: &MultiGraph, budget: &mut Budget) -> Result<PropertyXReport> {
    property_x_report_with(g1, &ReductionSpec::default_for(g1), g2, &ReductionSpec::default_for(g2), budget)
}

/// Evaluates each condition independently, each with its own copy of the
/// remaining budget; the parent is charged for the most expensive one.
pub fn property_x_report_with(
    g1: &MultiGraph,
    spec1: &ReductionSpec,
    g2: &MultiGraph,
    spec2: &ReductionSpec,
    budget: &mut Budget,
) -> Result<PropertyXReport> {
    if g1.loop_count() != g2.loop_count() {
        return Err(Error::LoopCountMismatch(g1.loop_count(), g2.loop_count()));
    }
    let steps = budget.remaining();
    let mut most = 0;
    let child = || Budget::new(steps);

    let l1 = reduced_laplacian(g1, spec1)?;
    let l2 = reduced_laplacian(g2, spec2)?;
    let mut b = child();
    let congruence = decide_congruence(&l1, &l2, &mut b)?;
    most = most.max(b.used());
    let cond1 = congruence.decision();

    let o1 = Orientation::default_for(g1);
    let o2 = Orientation::default_for(g2);
    let n1 = reduced_incidence(g1, &o1, spec1)?;
    let n2 = reduced_incidence(g2, &o2, spec2)?;
    let (cond2, strict_matching) = if g1.num_edges() != g2.num_edges() {
        (Decision::No, None)
    } else {
        let mut b = child();
        let accept = |s: &SignedMatching| matches!(strict_row_equivalence(&n1, &s.apply(&n2)), Ok(Some(_)));
        let r = decided(signed_column_search(&n1, &n2, &accept, &mut b))?;
        most = most.max(b.used());
        r
    };

    let full1 = incidence(g1, &o1)?;
    let full2 = incidence(g2, &o2)?;
    let (cond3, loose_matching) = if g1.num_edges() != g2.num_edges() {
        (Decision::No, None)
    } else {
        let b1 = row_lattice_basis(&full1);
        let b2 = row_lattice_basis(&full2);
        let mut b = child();
        let accept = |s: &SignedMatching| {
            loose_row_equivalence(&full1, &s.apply(&full2)).map(|l| l.equivalent).unwrap_or(false)
        };
        let r = decided(signed_column_search(&b1, &b2, &accept, &mut b))?;
        most = most.max(b.used());
        r
    };

    let mut b = child();
    let (cond4, two_isomorphism) = decided(decide_2_isomorphism_bruteforce(g1, g2, &mut b))?;
    most = most.max(b.used());

    let constructive = match &congruence.witness {
        Some(u) => Some(constructive_path(g1, spec1, g2, spec2, u.matrix())?),
        None => None,
    };

    let mut b = child();
    let unreduced = unreduced_report(g1, spec1, g2, spec2, cond4, &mut b)?;
    most = most.max(b.used());
    let _ = budget.spend(most.min(budget.remaining()));

    let decided_values: Vec<bool> = [cond1, cond2, cond3, cond4].iter().filter_map(|d| d.as_bool()).collect();
    let agree = decided_values.windows(2).all(|w| w[0] == w[1]);
    let constructive_ok = constructive.as_ref().map_or(true, |c| c.strictly_row_equivalent);
    let consistent = agree && constructive_ok && unreduced.agrees != Some(false) && unreduced.rank_identity && unreduced.reduction_identity;

    Ok(PropertyXReport {
        reduced_laplacians_congruent: cond1,
        reduced_incidences_strictly_equivalent: cond2,
        incidences_loosely_equivalent: cond3,
        two_isomorphic: cond4,
        congruence,
        strict_matching,
        loose_matching,
        two_isomorphism,
        constructive,
        unreduced,
        consistent,
    })
}

fn unreduced_report(
    g1: &MultiGraph,
    spec1: &ReductionSpec,
    g2: &MultiGraph,
    spec2: &ReductionSpec,
    two_iso: Decision,
    budget: &mut Budget,
) -> Result<UnreducedReport> {
    let full1 = laplacian(g1);
    let full2 = laplacian(g2);
    let lap = decide_congruence(&full1, &full2, budget)?.decision();
    let c1 = components(g1).count();
    let c2 = components(g2).count();
    let same = g1.num_vertices() == g2.num_vertices() && c1 == c2;
    let rank_identity = rank(&full1) == g1.num_vertices() - c1 && rank(&full2) == g2.num_vertices() - c2;
    let reduction_identity = reduction_holds(g1, spec1)? && reduction_holds(g2, spec2)?;
    let rhs = match two_iso {
        Decision::Yes => Some(same),
        Decision::No => Some(false),
        Decision::Unknown => {
            if same {
                None
            } else {
                Some(false)
            }
        }
    };
    let agrees = match (lap.as_bool(), rhs) {
        (Some(l), Some(r)) => Some(l == r),
        _ => None,
    };
    Ok(UnreducedReport { laplacians_congruent: lap, same_vertices_and_components: same, rank_identity, reduction_identity, agrees })
}

fn reduction_holds(g: &MultiGraph, spec: &ReductionSpec) -> Result<bool> {
    let u = reduction_transform(g, spec);
    let moved = laplacian(g).congruent_by(&u)?;
    let kept = spec.kept_vertices();
    let reduced_ok = moved.submatrix(kept, kept) == reduced_laplacian(g, spec)?;
    let zero_ok = spec
        .v0()
        .iter()
        .all(|&v| (0..g.num_vertices()).all(|w| moved.get(v, w).is_zero() && moved.get(w, v).is_zero()));
    Ok(reduced_ok && zero_ok)
}

/// Builds `Z = W X Y`, recovers a directed graph from `Z N(G1')`, matches it
/// with `G2'` and checks the resulting reduced incidences are strictly row
/// equivalent. `u` satisfies `u L_{V01}(G1) u^T = L_{V02}(G2)`.
pub fn constructive_path(
    g1: &MultiGraph,
    spec1: &ReductionSpec,
    g2: &MultiGraph,
    spec2: &ReductionSpec,
    u: &IntMatrix,
) -> Result<ConstructivePath> {
    if g2.num_edges() > g1.num_edges() {
        let inv = UnimodularWitness::new(u.clone())?.inverse();
        let back = constructive_path(g2, spec2, g1, spec1, &inv)?;
        let mut beta = vec![usize::MAX; back.beta.len()];
        for (e2, &e1) in back.beta.iter().enumerate() {
            beta[e1] = e2;
        }
        let witness = UnimodularWitness::new_unchecked(back.witness.inverse());
        return Ok(ConstructivePath {
            beta,
            orientation1: back.orientation2,
            orientation2: back.orientation1,
            witness,
            recovered: back.recovered,
            strictly_row_equivalent: back.strictly_row_equivalent,
        });
    }
    let k = u.rows();
    let (g1p, _) = g1.identify_vertices(spec1.v0());
    let (g2p, _) = g2.identify_vertices(spec2.v0());
    let z = border_transform(k).mul(&IntMatrix::identity(1).direct_sum(u))?.mul(&unborder_transform(k))?;
    let zw = UnimodularWitness::new(z)?;
    let o1 = Orientation::default_for(g1);
    let n1p = incidence(&g1p, &o1)?;
    let failed = |recovered: MultiGraph| ConstructivePath {
        beta: Vec::new(),
        orientation1: o1.clone(),
        orientation2: Orientation::default_for(g2),
        witness: UnimodularWitness::new_unchecked(u.clone()),
        recovered,
        strictly_row_equivalent: false,
    };
    let g3 = match lemma_center_recover(&n1p, &zw) {
        Ok(CenterOutcome { graph, .. }) => graph,
        Err(Error::TraceTooLarge { .. }) | Err(Error::RowSumNonzero) => {
            return Ok(failed(MultiGraph::new(0, vec![])?));
        }
        Err(e) => return Err(e),
    };
    if laplacian(&g3) != laplacian(&g2p) || g3.num_vertices() != g2p.num_vertices() {
        return Ok(failed(g3));
    }
    // Match edges of G3 with edges of G2' having the same endpoints.
    let mut pool: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    let mut loops2: Vec<usize> = Vec::new();
    for (f, &(a, b)) in g2p.edges().iter().enumerate().rev() {
        if a == b {
            loops2.push(f);
        } else {
            pool.entry((a.min(b), a.max(b))).or_default().push(f);
        }
    }
    loops2.reverse();
    let mut beta = vec![usize::MAX; g1.num_edges()];
    let mut rev2 = vec![false; g2.num_edges()];
    let mut next_loop = 0;
    for e in 0..g1.num_edges() {
        let column_zero = (0..n1p.rows()).all(|r| n1p.get(r, e).is_zero());
        if column_zero {
            match loops2.get(next_loop) {
                Some(&f) => beta[e] = f,
                None => return Ok(failed(g3)),
            }
            next_loop += 1;
            continue;
        }
        let (t, h) = g3.edge(e);
        let Some(f) = pool.get_mut(&(t.min(h), t.max(h))).and_then(|v| v.pop()) else {
            return Ok(failed(g3));
        };
        beta[e] = f;
        rev2[f] = g2p.edge(f).0 != t;
    }
    let o2 = Orientation::from_reversed(rev2);
    let a1 = reduced_incidence(g1, &o1, spec1)?;
    let a2 = reduced_incidence(g2, &o2, spec2)?.select_columns(&beta);
    let direct = u.mul(&a1)? == a2;
    let strict = strict_row_equivalence(&a1, &a2)?.is_some();
    Ok(ConstructivePath {
        beta,
        orientation1: o1,
        orientation2: o2,
        witness: UnimodularWitness::new_unchecked(u.clone()),
        recovered: g3,
        strictly_row_equivalent: direct && strict,
    })
}
