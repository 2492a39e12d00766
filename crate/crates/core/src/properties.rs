//! One checker per numbered property of Laplacians and dual Laplacians. Each
//! returns the matrices, forests and maps it used, so a pass can be replayed.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::budget::{Budget, Decision};
use crate::congruence::{property_x_report, strict_row_equivalence};
use crate::enumerate::{enumerate_maximal_forests, isomorphic_up_to_loops};
use crate::error::{Error, Result};
use crate::graph::{classify_edges, components, maximal_forest, strip_loops_and_isthmuses, ForestCertificate, MultiGraph, Orientation};
use crate::laplacian::{
    adjoin_negated_sum, border_zero_sum, cut_block, flow_matrix, incidence, laplacian, reduced_incidence, reduced_laplacian,
    BorderPosition, ReductionSpec,
};
use crate::matrix::{det_bareiss, IntMatrix};

pub const ALL_TAGS: [&str; 19] = [
    "I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X", "XI", "I*", "II*", "IV*", "V*", "VI*", "VII*",
    "VIII*", "IX*",
];

/// Cap on maximal-forest enumeration inside the checkers.
pub const FOREST_CAP: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessValue {
    Matrix(IntMatrix),
    Edges(Vec<usize>),
    Forests(Vec<Vec<usize>>),
    Integer(#[serde(with = "crate::json::bigint_str")] BigInt),
    Map(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub tag: String,
    pub passed: bool,
    pub witnesses: Vec<(String, WitnessValue)>,
}

impl PropertyReport {
    fn new(tag: &str) -> Self {
        PropertyReport { tag: tag.to_string(), passed: true, witnesses: Vec::new() }
    }

    fn check(&mut self, ok: bool) {
        self.passed &= ok;
    }

    fn matrix(&mut self, label: &str, m: &IntMatrix) {
        self.witnesses.push((label.to_string(), WitnessValue::Matrix(m.clone())));
    }

    fn push(&mut self, label: &str, w: WitnessValue) {
        self.witnesses.push((label.to_string(), w));
    }
}

struct Setup {
    o: Orientation,
    f: ForestCertificate,
    spec: ReductionSpec,
}

fn setup(g: &MultiGraph) -> Setup {
    Setup { o: Orientation::default_for(g), f: maximal_forest(g), spec: ReductionSpec::default_for(g) }
}

/// `g` plus one new vertex hung from vertex 0 by an isthmus (new last edge).
fn with_pendant(g: &MultiGraph) -> MultiGraph {
    let n = g.num_vertices();
    let mut edges = g.edges().to_vec();
    edges.push((0, n));
    MultiGraph::new(n + 1, edges).expect("valid endpoints")
}

pub fn verify_property(g: &MultiGraph, tag: &str, budget: &mut Budget) -> Result<PropertyReport> {
    let mut r = PropertyReport::new(tag);
    let s = setup(g);
    let l = laplacian(g);
    match tag {
        "I" => {
            r.check(l.is_symmetric());
            r.matrix("L", &l);
        }
        "II" => {
            let looped: Vec<(usize, usize)> = (0..g.num_vertices()).map(|v| (v, v)).collect();
            let more = g.with_edges(&looped)?;
            let keep: Vec<usize> = (0..g.num_edges()).filter(|&e| !g.is_loop(e)).collect();
            let fewer = g.edge_subgraph(&keep);
            r.check(laplacian(&more) == l && laplacian(&fewer) == l);
            r.matrix("L", &l);
        }
        "III" => {
            let n = g.num_vertices();
            let perm: Vec<usize> = (0..n).rev().collect();
            let mut h = g.relabel_vertices(&perm);
            if n > 0 {
                h = h.with_edges(&[(0, 0)])?;
            }
            let keep: Vec<usize> = (0..g.num_edges()).filter(|&e| !g.is_loop(e)).collect();
            let g0 = g.edge_subgraph(&keep);
            let h0 = h.edge_subgraph(&(0..h.num_edges()).filter(|&e| !h.is_loop(e)).collect::<Vec<_>>());
            let found = isomorphic_up_to_loops(&g0, &h0);
            let mut p = IntMatrix::zeros(n, n);
            for (v, &w) in perm.iter().enumerate() {
                p.set(w, v, BigInt::from(1));
            }
            r.check(laplacian(&h) == l.congruent_by(&p)? && found.is_some());
            if let Some(f) = found {
                r.push("vertex_map", WitnessValue::Map(f));
            }
            r.matrix("P", &p);
        }
        "IV" => {
            r.check(l.row_sums().iter().chain(l.col_sums().iter()).all(|x| x.is_zero()));
            r.matrix("L", &l);
        }
        "V" => {
            let expected = BigInt::from(2 * (g.num_edges() - g.loop_count()));
            r.check(l.trace() == expected);
            r.push("trace", WitnessValue::Integer(l.trace()));
        }
        "VI" => {
            let comps = components(g);
            let mut ok = true;
            for u in 0..g.num_vertices() {
                for v in 0..g.num_vertices() {
                    if comps.label[u] != comps.label[v] {
                        ok &= l.get(u, v).is_zero();
                    }
                }
            }
            for class in &comps.classes {
                let sub_edges: Vec<(usize, usize)> = g
                    .edges()
                    .iter()
                    .filter(|(a, _)| class.contains(a))
                    .map(|&(a, b)| (class.binary_search(&a).unwrap(), class.binary_search(&b).unwrap()))
                    .collect();
                let sub = MultiGraph::new(class.len(), sub_edges)?;
                ok &= laplacian(&sub) == l.submatrix(class, class);
            }
            r.check(ok);
            r.push("components", WitnessValue::Forests(comps.classes.clone()));
        }
        "VII" => {
            let n = incidence(g, &s.o)?;
            let nr = reduced_incidence(g, &s.o, &s.spec)?;
            r.check(n.gram() == l && nr.gram() == reduced_laplacian(g, &s.spec)?);
            r.matrix("N", &n);
            r.matrix("N_V0", &nr);
        }
        "VIII" | "IX" => {
            let other = ReductionSpec::last_for(g);
            let a = reduced_incidence(g, &s.o, &s.spec)?;
            let b = reduced_incidence(g, &s.o, &other)?;
            match strict_row_equivalence(&a, &b)? {
                Some(u) => {
                    if tag == "IX" {
                        let la = reduced_laplacian(g, &s.spec)?;
                        r.check(la.congruent_by(u.matrix())? == reduced_laplacian(g, &other)?);
                    }
                    r.matrix("U", u.matrix());
                }
                None => r.check(false),
            }
            r.push("V0", WitnessValue::Edges(s.spec.v0().to_vec()));
            r.push("V0_prime", WitnessValue::Edges(other.v0().to_vec()));
        }
        "X" => {
            let m = g.num_edges();
            let order: Vec<usize> = (0..m).rev().collect();
            let perm: Vec<usize> = (0..g.num_vertices()).rev().collect();
            let h = g.permute_edges(&order).relabel_vertices(&perm);
            let rep = property_x_report(g, &h, budget)?;
            let all_yes = rep.conditions().iter().all(|&d| d == Decision::Yes);
            r.check(rep.consistent && all_yes);
            if let Some(w) = &rep.congruence.witness {
                r.matrix("U", w.matrix());
            }
            if let Some(beta) = rep.two_isomorphism {
                r.push("beta", WitnessValue::Map(beta));
            }
        }
        "XI" => {
            let cb = cut_block(g, &s.o, &s.f, &s.spec)?;
            let nm = reduced_incidence(g, &s.o, &s.spec)?.select_columns(&s.f.forest_edges().to_vec());
            r.check(cb.cut_gram().congruent_by(&nm)? == reduced_laplacian(g, &s.spec)?);
            r.matrix("N_V0(M)", &nm);
            r.push("forest", WitnessValue::Edges(s.f.forest_edges().to_vec()));
        }
        "I*" => {
            let fm = flow_matrix(g, &s.o, &s.f, &s.spec)?;
            let red = fm.gram();
            let unred = adjoin_negated_sum(&fm).gram();
            r.check(red.is_symmetric() && unred.is_symmetric());
            r.matrix("L*_V0", &red);
            r.matrix("L*", &unred);
        }
        "II*" => {
            let base = cut_block(g, &s.o, &s.f, &s.spec)?.flow_gram();
            let bigger = with_pendant(g);
            let mut forest = s.f.forest_edges().to_vec();
            forest.push(g.num_edges());
            let fb = ForestCertificate::new(&bigger, &forest)?;
            let added = cut_block(&bigger, &Orientation::default_for(&bigger), &fb, &ReductionSpec::default_for(&bigger))?
                .flow_gram();
            let (h, kept) = strip_loops_and_isthmuses(g);
            let isthmuses = classify_edges(g).isthmuses;
            let h_forest: Vec<usize> = (0..kept.len()).filter(|&i| s.f.contains(kept[i])).collect();
            let loops: Vec<usize> = (0..g.num_edges()).filter(|&e| g.is_loop(e)).collect();
            // Removing isthmuses alone keeps loops, so compare on the loop-free part.
            let removed = if loops.is_empty() && !isthmuses.is_empty() {
                let fh = ForestCertificate::new(&h, &h_forest)?;
                Some(cut_block(&h, &Orientation::default_for(&h), &fh, &ReductionSpec::default_for(&h))?.flow_gram())
            } else {
                None
            };
            r.check(added == base && removed.as_ref().map_or(true, |x| x == &base));
            r.matrix("L*_V0", &base);
            r.push("isthmuses", WitnessValue::Edges(isthmuses));
        }
        "IV*" => {
            let cb = cut_block(g, &s.o, &s.f, &s.spec)?;
            let unred = adjoin_negated_sum(&flow_matrix(g, &s.o, &s.f, &s.spec)?).gram();
            let forests = enumerate_maximal_forests(g, FOREST_CAP)?;
            let det = det_bareiss(&cb.flow_gram())?;
            r.check(unred.row_sums().iter().all(|x| x.is_zero()) && det == BigInt::from(forests.len()));
            r.push("det", WitnessValue::Integer(det));
            r.push("forest_count", WitnessValue::Integer(BigInt::from(forests.len())));
        }
        "V*" => {
            let bound = BigInt::from(2 * (g.num_edges() - classify_edges(g).isthmuses.len()));
            let mut ok = true;
            let mut traces = Vec::new();
            for f in enumerate_maximal_forests(g, FOREST_CAP)? {
                let t = adjoin_negated_sum(&flow_matrix(g, &s.o, &f, &s.spec)?).gram().trace();
                ok &= (&t % 2u32).is_zero() && t >= bound;
                traces.push(t);
            }
            r.check(ok);
            r.push("lower_bound", WitnessValue::Integer(bound));
            if let Some(min) = traces.into_iter().min() {
                r.push("least_tree_trace", WitnessValue::Integer(min));
            }
        }
        "VI*" => {
            let comps = components(g);
            let reps: Vec<usize> = comps.classes.iter().map(|c| c[0]).collect();
            let bridges: Vec<(usize, usize)> = reps.windows(2).map(|w| (w[0], w[1])).collect();
            let joined = g.with_edges(&bridges)?;
            let mut forest = s.f.forest_edges().to_vec();
            forest.extend(g.num_edges()..joined.num_edges());
            let fj = ForestCertificate::new(&joined, &forest)?;
            let a = cut_block(g, &s.o, &s.f, &s.spec)?.flow_gram();
            let b = cut_block(&joined, &Orientation::default_for(&joined), &fj, &ReductionSpec::default_for(&joined))?
                .flow_gram();
            let fa = adjoin_negated_sum(&flow_matrix(g, &s.o, &s.f, &s.spec)?).gram();
            let fb = adjoin_negated_sum(&flow_matrix(&joined, &Orientation::default_for(&joined), &fj, &ReductionSpec::default_for(&joined))?).gram();
            r.check(a == b && fa == fb);
            r.push("added_isthmuses", WitnessValue::Edges((g.num_edges()..joined.num_edges()).collect()));
        }
        "VII*" => {
            let cb = cut_block(g, &s.o, &s.f, &s.spec)?;
            let fm = flow_matrix(g, &s.o, &s.f, &s.spec)?;
            let fhat = adjoin_negated_sum(&fm);
            let red = cb.flow_gram();
            r.check(fm.gram() == red && fhat.gram() == border_zero_sum(&red, BorderPosition::First));
            r.matrix("F", &fm);
            r.matrix("F_hat F_hat^T", &fhat.gram());
        }
        "VIII*" | "IX*" => {
            let base = flow_matrix(g, &s.o, &s.f, &s.spec)?;
            let base_hat = adjoin_negated_sum(&base);
            let specs = [s.spec.clone(), ReductionSpec::last_for(g)];
            let forests = enumerate_maximal_forests(g, FOREST_CAP)?;
            let mut ok = true;
            for f in &forests {
                for spec in &specs {
                    let other = flow_matrix(g, &s.o, f, spec)?;
                    match strict_row_equivalence(&base, &other)? {
                        Some(w) if tag == "IX*" => {
                            let k = w.matrix().rows();
                            // Z = (1, 1^T - 1^T W; 0, W) carries F̂ to F̂'.
                            let sums = w.matrix().col_sums();
                            let mut z = IntMatrix::identity(k + 1);
                            for c in 0..k {
                                z.set(0, c + 1, BigInt::from(1) - &sums[c]);
                                for row in 0..k {
                                    z.set(row + 1, c + 1, w.matrix().get(row, c).clone());
                                }
                            }
                            ok &= base.gram().congruent_by(w.matrix())? == other.gram()
                                && base_hat.gram().congruent_by(&z)? == adjoin_negated_sum(&other).gram();
                        }
                        Some(_) => {}
                        None => ok = false,
                    }
                }
            }
            r.check(ok);
            r.push("forests", WitnessValue::Forests(forests.iter().map(|f| f.forest_edges().to_vec()).collect()));
        }
        _ => return Err(Error::UnknownTag(tag.to_string())),
    }
    Ok(r)
}
