//! Generators and invariant suites shared by the `invariants` tests and the
//! acceptance report. Each suite runs a fixed number of seeded cases.
#![allow(dead_code)]

use lapdual::congruence::{congruence_invariants, decide_congruence, property_x_report, CongruenceStatus, SeparatingInvariant};
use lapdual::duality::{decide_planarity, lemma_center_recover, superbase_trace_minimize, PlanarityVerdict, SuperbaseMove};
use lapdual::enumerate::{decide_2_isomorphism_bruteforce, enumerate_maximal_forests};
use lapdual::graph::{
    classify_edges, components, cut_vector, fundamental_circuit_vector, maximal_forest_by_order, ForestCertificate,
    MultiGraph, Orientation,
};
use lapdual::json::{parse_graph, parse_matrix};
use lapdual::laplacian::{
    cut_block, flow_matrix, incidence, laplacian, reduced_incidence, reduced_laplacian, superbase_matrix,
    ReductionSpec,
};
use lapdual::matrix::{det_bareiss, hermite_normal_form, inverse_unimodular, smith_normal_form};
use lapdual::planarity::{kuratowski_oracle, maclane_oracle, verify_minor};
use lapdual::{Budget, Decision, IntMatrix};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::sample::Index;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

pub fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, max_shrink_iters: 256, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

/// Any multigraph, loops included.
pub fn graph(max_n: usize, max_m: usize) -> BoxedStrategy<MultiGraph> {
    (1..=max_n)
        .prop_flat_map(move |n| prop::collection::vec((0..n, 0..n), 0..=max_m).prop_map(move |es| MultiGraph::new(n, es).unwrap()))
        .boxed()
}

/// Connected multigraphs: a random spanning tree plus extra edges.
pub fn connected_graph(max_n: usize, max_m: usize, loops: bool) -> BoxedStrategy<MultiGraph> {
    (1..=max_n)
        .prop_flat_map(move |n| {
            let extra = max_m.saturating_sub(n - 1);
            (Just(n), prop::collection::vec(any::<Index>(), n - 1), prop::collection::vec((0..n, 0..n), 0..=extra))
        })
        .prop_map(move |(n, parents, extra)| {
            let mut es: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, p)| (p.index(i + 1), i + 1)).collect();
            es.extend(extra.into_iter().filter(|&(u, v)| loops || u != v));
            MultiGraph::new(n, es).unwrap()
        })
        .boxed()
}

/// Connected simple graphs on up to `max_n` vertices.
pub fn simple_connected(max_n: usize, density: f64) -> BoxedStrategy<MultiGraph> {
    (1..=max_n)
        .prop_flat_map(move |n| {
            let pairs = n * (n - 1) / 2;
            (Just(n), prop::collection::vec(any::<Index>(), n - 1), prop::collection::vec(prop::bool::weighted(density), pairs))
        })
        .prop_map(|(n, parents, picks)| {
            let mut set = std::collections::BTreeSet::new();
            for (i, p) in parents.iter().enumerate() {
                let u = p.index(i + 1);
                set.insert((u, i + 1));
            }
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if picks[k] {
                        set.insert((u, v));
                    }
                    k += 1;
                }
            }
            MultiGraph::new(n, set.into_iter().collect()).unwrap()
        })
        .boxed()
}

/// A graph with an orientation, a maximal forest and a reduction vertex set.
#[derive(Clone, Debug)]
pub struct Setup {
    pub g: MultiGraph,
    pub o: Orientation,
    pub f: ForestCertificate,
    pub spec: ReductionSpec,
}

pub fn setup_from(g: BoxedStrategy<MultiGraph>) -> BoxedStrategy<Setup> {
    g.prop_flat_map(|g| {
        let m = g.num_edges();
        let order: Vec<usize> = (0..m).collect();
        (
            Just(g.clone()),
            prop::collection::vec(any::<bool>(), m),
            Just(order).prop_shuffle(),
            prop::collection::vec(any::<Index>(), g.num_vertices()),
        )
    })
    .prop_map(|(g, bits, order, picks)| {
        let comps = components(&g);
        let v0: Vec<usize> = comps.classes.iter().zip(&picks).map(|(c, p)| c[p.index(c.len())]).collect();
        Setup {
            o: Orientation::from_reversed(bits),
            f: maximal_forest_by_order(&g, &order),
            spec: ReductionSpec::new(&g, &v0).unwrap(),
            g,
        }
    })
    .boxed()
}

/// Product of random elementary integer operations: unimodular by
/// construction, not by any library check.
pub fn unimodular(k: usize) -> BoxedStrategy<IntMatrix> {
    prop::collection::vec((0..k, 0..k, -2i64..=2, 0u8..4), 0..14)
        .prop_map(move |ops| {
            let mut u = IntMatrix::identity(k);
            for (i, j, s, kind) in ops {
                match kind {
                    0 if i != j => u.swap_rows(i, j),
                    1 => u.negate_row(i),
                    _ if i != j => u.add_row_multiple(i, j, &BigInt::from(s)),
                    _ => {}
                }
            }
            u
        })
        .boxed()
}

pub fn int_matrix(max_r: usize, max_c: usize, lim: i64) -> BoxedStrategy<IntMatrix> {
    (1..=max_r, 1..=max_c)
        .prop_flat_map(move |(r, c)| {
            prop::collection::vec(-lim..=lim, r * c)
                .prop_map(move |v| IntMatrix::from_vec(r, c, v.into_iter().map(BigInt::from).collect()).unwrap())
        })
        .boxed()
}

/// Symmetric `k x k` matrices, optionally positive semidefinite.
pub fn symmetric(k: usize, psd: bool) -> BoxedStrategy<IntMatrix> {
    if psd {
        (1..=k + 1)
            .prop_flat_map(move |r| {
                prop::collection::vec(-2i64..=2, r * k)
                    .prop_map(move |v| IntMatrix::from_vec(r, k, v.into_iter().map(BigInt::from).collect()).unwrap().transpose().gram())
            })
            .boxed()
    } else {
        prop::collection::vec(-3i64..=3, k * k)
            .prop_map(move |v| {
                let mut a = IntMatrix::zeros(k, k);
                for i in 0..k {
                    for j in i..k {
                        a.set(i, j, BigInt::from(v[i * k + j]));
                        a.set(j, i, BigInt::from(v[i * k + j]));
                    }
                }
                a
            })
            .boxed()
    }
}

/// Swaps `u` and `v` on every edge meeting one piece of `G - {u, v}`. When
/// `{u, v}` separates this is a Whitney twist; otherwise it relabels. Either
/// way the result is 2-isomorphic to `g` with edges matched by index.
pub fn whitney_twist(g: &MultiGraph, u: usize, v: usize, piece: usize) -> MultiGraph {
    let n = g.num_vertices();
    let rest: Vec<usize> = (0..g.num_edges()).filter(|&e| {
        let (a, b) = g.edge(e);
        a != u && a != v && b != u && b != v
    }).collect();
    let comps = components(&g.edge_subgraph(&rest));
    let others: Vec<usize> = (0..n).filter(|&w| w != u && w != v).collect();
    if others.is_empty() {
        return g.clone();
    }
    let label = comps.label[others[piece % others.len()]];
    let swap = |x: usize| if x == u { v } else if x == v { u } else { x };
    let edges = g
        .edges()
        .iter()
        .map(|&(a, b)| {
            let touches = (a != u && a != v && comps.label[a] == label) || (b != u && b != v && comps.label[b] == label);
            if touches {
                (swap(a), swap(b))
            } else {
                (a, b)
            }
        })
        .collect();
    MultiGraph::new(n, edges).unwrap()
}

fn hnf_rows(a: &IntMatrix) -> IntMatrix {
    let (h, _) = hermite_normal_form(a);
    let nz: Vec<usize> = (0..h.rows()).filter(|&i| h.row(i).iter().any(|x| !x.is_zero())).collect();
    h.select_rows(&nz)
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

pub type Suite = (&'static str, u32, fn(u32) -> Result<(), String>);

pub fn suites() -> Vec<Suite> {
    vec![
        ("graph: forest count equals reduced Laplacian determinant", 1000, forest_count_matches_det),
        ("graph: circuits are orthogonal to cuts", 1000, circuits_orthogonal_to_cuts),
        ("graph: isthmuses are the forest intersection", 500, isthmuses_are_forest_intersection),
        ("graph: 2-isomorphism is reflexive and symmetric", 300, two_isomorphism_reflexive_symmetric),
        ("matrix: HNF witness is unimodular and exact", 1000, hnf_witness_exact),
        ("matrix: SNF and det are congruence invariants", 1000, snf_det_congruence_invariant),
        ("matrix: unimodular inverse", 1000, unimodular_inverse),
        ("laplacian: N N^T is the Laplacian", 1000, incidence_gram_is_laplacian),
        ("laplacian: (I | C) P_M reconstructs the reduced incidence", 500, cut_block_reconstructs),
        ("laplacian: flows are orthogonal to the reduced incidence", 1000, flows_orthogonal_to_incidence),
        ("laplacian: flow lattice independent of forest and V0", 500, flow_lattice_independent),
        ("laplacian: edge reversal acts by a sign change", 500, edge_reversal_sign_change),
        ("laplacian: det(I' + C^T C) equals det L_V0", 500, dual_det_matches),
        ("laplacian: isthmuses and loops leave dual and primal Laplacians alone", 500, isthmus_and_loop_invariance),
        ("congruence: verdicts replay or name a differing invariant", 500, congruence_verdicts_sound),
        ("congruence: four conditions agree on small pairs", 150, property_x_agreement),
        ("duality: superbase states stay valid", 300, superbase_state_valid),
        ("duality: descent moves preserve the flow lattice", 1000, moves_preserve_lattice),
        ("duality: center recovery inverts incidence", 1000, center_round_trip),
        ("duality: planarity verdicts agree with both oracles", 300, planarity_oracles_agree),
        ("json: graphs and matrices round-trip", 1000, json_round_trip),
    ]
}

fn run<S: Strategy>(cases: u32, s: S, f: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    runner(cases).run(&s, f).map_err(|e| e.to_string())
}

fn forest_count_matches_det(cases: u32) -> Result<(), String> {
    run(cases, graph(5, 8), |g| {
        let forests = enumerate_maximal_forests(&g, 100_000).unwrap().len();
        let d = det_bareiss(&reduced_laplacian(&g, &ReductionSpec::default_for(&g)).unwrap()).unwrap();
        check(d == BigInt::from(forests), || format!("{forests} forests, det {d}"))
    })
}

fn circuits_orthogonal_to_cuts(cases: u32) -> Result<(), String> {
    let s = setup_from(graph(6, 9)).prop_flat_map(|s| {
        let n = s.g.num_vertices();
        (Just(s), prop::collection::vec(any::<bool>(), n))
    });
    run(cases, s, |(s, mask)| {
        let w: Vec<usize> = (0..mask.len()).filter(|&v| mask[v]).collect();
        if w.is_empty() || w.len() == mask.len() {
            return Ok(());
        }
        let cut = cut_vector(&s.g, &s.o, &w).unwrap();
        for &e in s.f.cotree_edges() {
            let c = fundamental_circuit_vector(&s.g, &s.o, &s.f, e).unwrap();
            check(c.dot(&cut) == 0, || format!("circuit of {e} meets cut {w:?}"))?;
        }
        Ok(())
    })
}

fn isthmuses_are_forest_intersection(cases: u32) -> Result<(), String> {
    run(cases, graph(6, 8), |g| {
        let forests = enumerate_maximal_forests(&g, 100_000).unwrap();
        let common: Vec<usize> = (0..g.num_edges()).filter(|&e| forests.iter().all(|f| f.contains(e))).collect();
        check(classify_edges(&g).isthmuses == common, || format!("{common:?}"))
    })
}

fn two_isomorphism_reflexive_symmetric(cases: u32) -> Result<(), String> {
    let s = (graph(4, 6), graph(4, 6)).prop_flat_map(|(a, b)| {
        let n = a.num_vertices();
        (Just(a), Just(b), 0..n, 0..n, 0..n.max(1))
    });
    run(cases, s, |(a, b, u, v, piece)| {
        let twin = whitney_twist(&a, u, v, piece);
        let mut bud = Budget::new(1 << 22);
        check(decide_2_isomorphism_bruteforce(&a, &a, &mut bud).unwrap().is_some(), || "not reflexive".into())?;
        check(decide_2_isomorphism_bruteforce(&a, &twin, &mut bud).unwrap().is_some(), || "twist not 2-isomorphic".into())?;
        let ab = decide_2_isomorphism_bruteforce(&a, &b, &mut bud).unwrap().is_some();
        let ba = decide_2_isomorphism_bruteforce(&b, &a, &mut bud).unwrap().is_some();
        check(ab == ba, || "not symmetric".into())
    })
}

fn hnf_witness_exact(cases: u32) -> Result<(), String> {
    run(cases, int_matrix(5, 6, 6), |a| {
        let (h, u) = hermite_normal_form(&a);
        let d = det_bareiss(u.matrix()).unwrap();
        check(d == BigInt::one() || d == -BigInt::one(), || format!("det {d}"))?;
        check(u.matrix().mul(&a).unwrap() == h, || "u a != h".into())
    })
}

fn snf_det_congruence_invariant(cases: u32) -> Result<(), String> {
    let s = (1usize..=4).prop_flat_map(|k| (symmetric(k, false), unimodular(k)));
    run(cases, s, |(a, u)| {
        let b = a.congruent_by(&u).unwrap();
        check(smith_normal_form(&a).diag == smith_normal_form(&b).diag, || "SNF moved".into())?;
        check(det_bareiss(&a).unwrap() == det_bareiss(&b).unwrap(), || "det moved".into())
    })
}

fn unimodular_inverse(cases: u32) -> Result<(), String> {
    let s = (1usize..=5).prop_flat_map(unimodular);
    run(cases, s, |u| {
        let inv = inverse_unimodular(&u).unwrap();
        let id = IntMatrix::identity(u.rows());
        check(inv.mul(&u).unwrap() == id && u.mul(&inv).unwrap() == id, || "not an inverse".into())
    })
}

fn incidence_gram_is_laplacian(cases: u32) -> Result<(), String> {
    run(cases, setup_from(graph(6, 9)), |s| {
        let n = incidence(&s.g, &s.o).unwrap();
        check(n.gram() == laplacian(&s.g), || "N N^T".into())?;
        let nr = reduced_incidence(&s.g, &s.o, &s.spec).unwrap();
        check(nr.gram() == reduced_laplacian(&s.g, &s.spec).unwrap(), || "reduced".into())
    })
}

fn cut_block_reconstructs(cases: u32) -> Result<(), String> {
    run(cases, setup_from(graph(6, 9)), |s| {
        let cb = cut_block(&s.g, &s.o, &s.f, &s.spec).unwrap();
        let nr = reduced_incidence(&s.g, &s.o, &s.spec).unwrap();
        let inv = inverse_unimodular(&nr.select_columns(s.f.forest_edges())).unwrap();
        check(cb.fundamental_cut_matrix() == inv.mul(&nr).unwrap(), || "(I | C) P_M".into())
    })
}

fn flows_orthogonal_to_incidence(cases: u32) -> Result<(), String> {
    run(cases, setup_from(graph(6, 9)), |s| {
        let fm = flow_matrix(&s.g, &s.o, &s.f, &s.spec).unwrap();
        let n = incidence(&s.g, &s.o).unwrap();
        check(fm.mul(&n.transpose()).unwrap().is_zero(), || "F N^T != 0".into())
    })
}

fn flow_lattice_independent(cases: u32) -> Result<(), String> {
    let s = setup_from(graph(6, 9)).prop_flat_map(|s| {
        let m = s.g.num_edges();
        let order: Vec<usize> = (0..m).collect();
        (Just(s), Just(order).prop_shuffle())
    });
    run(cases, s, |(s, order)| {
        let other = maximal_forest_by_order(&s.g, &order);
        let a = flow_matrix(&s.g, &s.o, &s.f, &s.spec).unwrap();
        let b = flow_matrix(&s.g, &s.o, &other, &ReductionSpec::last_for(&s.g)).unwrap();
        check(hnf_rows(&a) == hnf_rows(&b), || "HNF differs".into())
    })
}

fn edge_reversal_sign_change(cases: u32) -> Result<(), String> {
    let s = setup_from(graph(6, 9)).prop_flat_map(|s| {
        let m = s.g.num_edges().max(1);
        (Just(s), 0..m)
    });
    run(cases, s, |(s, e)| {
        if s.g.num_edges() == 0 {
            return Ok(());
        }
        let base = cut_block(&s.g, &s.o, &s.f, &s.spec).unwrap().flow_gram();
        let flipped = cut_block(&s.g, &s.o.with_reversed(e), &s.f, &s.spec).unwrap().flow_gram();
        let k = base.rows();
        let mut d = IntMatrix::identity(k);
        if let Some(pos) = s.f.cotree_edges().iter().position(|&c| c == e) {
            d.negate_row(pos);
        }
        check(base.congruent_by(&d).unwrap() == flipped, || format!("reversing {e}"))
    })
}

fn dual_det_matches(cases: u32) -> Result<(), String> {
    run(cases, setup_from(graph(5, 8)), |s| {
        let dual = cut_block(&s.g, &s.o, &s.f, &s.spec).unwrap().flow_gram();
        let a = det_bareiss(&dual).unwrap();
        let b = det_bareiss(&reduced_laplacian(&s.g, &s.spec).unwrap()).unwrap();
        check(a == b, || format!("{a} vs {b}"))
    })
}

fn isthmus_and_loop_invariance(cases: u32) -> Result<(), String> {
    let s = setup_from(graph(5, 8)).prop_flat_map(|s| {
        let n = s.g.num_vertices();
        (Just(s), 0..n, any::<bool>())
    });
    run(cases, s, |(s, v, rev)| {
        let n = s.g.num_vertices();
        let m = s.g.num_edges();
        let mut es = s.g.edges().to_vec();
        es.push((v, n));
        let g2 = MultiGraph::new(n + 1, es).unwrap();
        let mut bits = s.o.reversed_bits().to_vec();
        bits.push(rev);
        let mut forest = s.f.forest_edges().to_vec();
        forest.push(m);
        let f2 = ForestCertificate::new(&g2, &forest).unwrap();
        let spec2 = ReductionSpec::new(&g2, s.spec.v0()).unwrap();
        let a = cut_block(&s.g, &s.o, &s.f, &s.spec).unwrap().flow_gram();
        let b = cut_block(&g2, &Orientation::from_reversed(bits), &f2, &spec2).unwrap().flow_gram();
        check(a == b, || "isthmus changed the dual Laplacian".into())?;
        let looped = s.g.with_edges(&[(v, v)]).unwrap();
        check(laplacian(&looped) == laplacian(&s.g), || "loop changed L".into())
    })
}

fn congruence_verdicts_sound(cases: u32) -> Result<(), String> {
    let s = (1usize..=4, any::<bool>(), any::<bool>())
        .prop_flat_map(|(k, psd, related)| (symmetric(k, psd), symmetric(k, psd), unimodular(k), Just(related)));
    run(cases, s, |(a, other, u, related)| {
        let b = if related { a.congruent_by(&u).unwrap() } else { other };
        let v = decide_congruence(&a, &b, &mut Budget::new(200_000)).unwrap();
        match v.status {
            CongruenceStatus::Congruent => {
                let w = v.witness.unwrap();
                check(a.congruent_by(w.matrix()).unwrap() == b, || "witness does not replay".into())
            }
            CongruenceStatus::NotCongruent => {
                let (ia, ib) = (congruence_invariants(&a).unwrap(), congruence_invariants(&b).unwrap());
                let differs = match v.separating_invariant.unwrap() {
                    SeparatingInvariant::Size { a, b } => a != b && a == ia.size && b == ib.size,
                    SeparatingInvariant::Rank { a, b } => a != b && a == ia.rank && b == ib.rank,
                    SeparatingInvariant::Det { a, b } => a != b && a == ia.det && b == ib.det,
                    SeparatingInvariant::Inertia { a, b } => a != b && a == ia.inertia && b == ib.inertia,
                    SeparatingInvariant::Snf { a, b } => a != b && a == ia.snf && b == ib.snf,
                    SeparatingInvariant::Theta { a, b } => a != b,
                    SeparatingInvariant::IsometrySearch => true,
                };
                check(differs && !related, || "separating invariant does not separate".into())
            }
            CongruenceStatus::Unknown => check(a.rows() > 0, || "unknown on empty".into()),
        }
    })
}

fn property_x_agreement(cases: u32) -> Result<(), String> {
    let s = (graph(4, 6), graph(4, 6), any::<bool>()).prop_flat_map(|(a, b, twin)| {
        let n = a.num_vertices();
        (Just(a), Just(b), Just(twin), 0..n, 0..n, 0..n.max(1))
    });
    run(cases, s, |(a, b, twin, u, v, piece)| {
        let b = if twin { whitney_twist(&a, u, v, piece) } else { b };
        if a.loop_count() != b.loop_count() {
            return Ok(());
        }
        let r = property_x_report(&a, &b, &mut Budget::new(1 << 20)).unwrap();
        let [c1, _, _, c4] = r.conditions();
        if c1.is_decided() && c4.is_decided() {
            check(c1 == c4, || format!("cond1 {c1:?} vs cond4 {c4:?}"))?;
        }
        if twin {
            check(c4 == Decision::Yes, || "twist not 2-isomorphic".into())?;
        }
        if let Some(c) = &r.constructive {
            check(c.strictly_row_equivalent, || "constructive path failed".into())?;
        }
        check(r.unreduced.agrees != Some(false), || "unreduced form disagrees".into())?;
        check(r.consistent, || "report inconsistent".into())
    })
}

fn superbase_state_valid(cases: u32) -> Result<(), String> {
    run(cases, (setup_from(connected_graph(6, 9, true)), any::<u64>()), |(s, seed)| {
        let st = superbase_trace_minimize(&s.g, &s.o, &s.f, &s.spec, &mut Budget::new(20_000), seed).unwrap();
        check(st.f_hat.col_sums().iter().all(|x| x.is_zero()), || "rows do not sum to zero".into())?;
        check(st.gram == st.f_hat.gram() && st.trace == st.gram.trace(), || "gram out of date".into())?;
        check((&st.trace % 2u32).is_zero(), || "odd trace".into())?;
        check(st.trace >= st.lower_bound, || "trace below 2(m - i)".into())
    })
}

fn moves_preserve_lattice(cases: u32) -> Result<(), String> {
    let s = (setup_from(graph(6, 10)), prop::collection::vec(any::<Index>(), 0..12), any::<Index>());
    run(cases, s, |(s, picks, drop)| {
        let mut fh = superbase_matrix(&s.g, &s.o, &s.f, &s.spec).unwrap();
        let rows = fh.rows();
        let moves = SuperbaseMove::all(rows);
        if !moves.is_empty() {
            for p in &picks {
                p.get(&moves).apply(&mut fh);
            }
        }
        let keep: Vec<usize> = (0..rows).filter(|&r| r != drop.index(rows)).collect();
        let base = flow_matrix(&s.g, &s.o, &s.f, &s.spec).unwrap();
        check(fh.col_sums().iter().all(|x| x.is_zero()), || "row sums".into())?;
        check(hnf_rows(&fh.select_rows(&keep)) == hnf_rows(&base), || "lattice moved".into())
    })
}

fn center_round_trip(cases: u32) -> Result<(), String> {
    run(cases, (graph(6, 9), prop::collection::vec(any::<bool>(), 9)), |(g, bits)| {
        let o = Orientation::from_reversed(bits[..g.num_edges()].to_vec());
        let n = incidence(&g, &o).unwrap();
        let out = lemma_center_recover(&n, &lapdual::UnimodularWitness::identity(n.rows())).unwrap();
        for e in 0..g.num_edges() {
            let got = out.graph.edge(e);
            if g.is_loop(e) {
                check(out.graph.is_loop(e), || format!("edge {e} should be a loop"))?;
            } else {
                check(got == o.ends(&g, e), || format!("edge {e}: {got:?}"))?;
            }
        }
        check(out.incidence == n, || "incidence changed".into())
    })
}

fn planarity_oracles_agree(cases: u32) -> Result<(), String> {
    run(cases, (simple_connected(7, 0.55), any::<u64>()), |(g, seed)| {
        let v = decide_planarity(&g, &mut Budget::new(1_000_000), seed).unwrap();
        let k = kuratowski_oracle(&g, &mut Budget::new(1_000_000));
        let m = maclane_oracle(&g, &mut Budget::new(1_000_000));
        match &v {
            PlanarityVerdict::Planar(c) => check(c.check(&g).unwrap(), || "certificate fails".into())?,
            PlanarityVerdict::Nonplanar(ev) => check(verify_minor(&g, ev), || "bad minor".into())?,
            PlanarityVerdict::Unknown { .. } => {}
        }
        let d = v.decision();
        for other in [k.decision(), m.decision()] {
            if d.is_decided() && other.is_decided() {
                check(d == other, || format!("{d:?} vs {other:?}"))?;
            }
        }
        Ok(())
    })
}

fn json_round_trip(cases: u32) -> Result<(), String> {
    run(cases, (graph(6, 9), int_matrix(4, 4, 1_000_000)), |(g, a)| {
        let big = a.scale(&BigInt::parse_bytes(b"98765432109876543210", 10).unwrap());
        check(parse_graph(&serde_json::to_string(&g).unwrap()).unwrap() == g, || "graph".into())?;
        check(parse_matrix(&serde_json::to_string(&big).unwrap()).unwrap() == big, || "matrix".into())
    })
}
