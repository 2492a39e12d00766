use std::path::Path;

use lapdual::congruence::{decide_congruence, property_x_report, CongruenceStatus};
use lapdual::duality::{decide_planarity, verify_abstract_dual, DualCertificate, PlanarityVerdict};
use lapdual::enumerate::decide_2_isomorphism_bruteforce;
use lapdual::graph::{maximal_forest, ForestCertificate, MultiGraph, Orientation};
use lapdual::json::{certificate_to_value, evidence_to_value, matrix_to_value, parse_graph, parse_matrix, verdict_to_value};
use lapdual::laplacian::{
    cut_block, flow_matrix, incidence, laplacian, reduced_dual_laplacian, reduced_incidence, reduced_laplacian,
    superbase_matrix, ReductionSpec,
};
use lapdual::matrix::{rank, smith_normal_form};
use lapdual::properties::verify_property;
use lapdual::{Budget, Decision, Error};
use serde_json::{json, Value};

use crate::{Command, GlobalOpts};

pub const EXIT_NO: u8 = 1;
pub const EXIT_UNKNOWN: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATA: u8 = 65;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn usage(message: String) -> Self {
        CliError { code: EXIT_USAGE, kind: "usage", message }
    }

    fn data(message: String) -> Self {
        CliError { code: EXIT_DATA, kind: "malformed_input", message }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidReductionSpec(_) | Error::NotMaximalForest(_) | Error::UnknownTag(_) => {
                CliError::usage(e.to_string())
            }
            Error::BudgetExceeded | Error::CapExceeded { .. } => {
                CliError { code: EXIT_UNKNOWN, kind: "budget", message: e.to_string() }
            }
            _ => CliError::data(e.to_string()),
        }
    }
}

/// JSON or DOT text, with the exit code it should end with.
pub enum Output {
    Json(Value, u8),
    Text(String, u8),
}

impl Output {
    pub fn code(&self) -> u8 {
        match self {
            Output::Json(_, c) | Output::Text(_, c) => *c,
        }
    }
}

fn decision_code(d: Decision) -> u8 {
    match d {
        Decision::Yes => 0,
        Decision::No => EXIT_NO,
        Decision::Unknown => EXIT_UNKNOWN,
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| CliError::data(format!("cannot read stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<MultiGraph, CliError> {
    Ok(parse_graph(&read(path)?)?)
}

fn load_matrix(path: &Path) -> Result<lapdual::IntMatrix, CliError> {
    Ok(parse_matrix(&read(path)?)?)
}

/// Parses `e0,e3,4` style lists; the prefix letter is optional.
fn parse_indices(text: &str, prefix: char, flag: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let digits = t.strip_prefix(prefix).or_else(|| t.strip_prefix(prefix.to_ascii_uppercase())).unwrap_or(t);
            digits.parse().map_err(|_| CliError::usage(format!("--{flag}: cannot read {t:?} as an index")))
        })
        .collect()
}

fn forest_for(g: &MultiGraph, opts: &GlobalOpts) -> Result<ForestCertificate, CliError> {
    if opts.forest == "auto" {
        return Ok(maximal_forest(g));
    }
    Ok(ForestCertificate::new(g, &parse_indices(&opts.forest, 'e', "forest")?)?)
}

fn spec_for(g: &MultiGraph, opts: &GlobalOpts) -> Result<ReductionSpec, CliError> {
    if opts.v0 == "auto" {
        return Ok(ReductionSpec::default_for(g));
    }
    Ok(ReductionSpec::new(g, &parse_indices(&opts.v0, 'v', "v0")?)?)
}

fn planarity_value(v: &PlanarityVerdict) -> Value {
    match v {
        PlanarityVerdict::Planar(c) => json!({ "status": "planar", "certificate": certificate_to_value(c) }),
        PlanarityVerdict::Nonplanar(ev) => json!({ "status": "nonplanar", "evidence": evidence_to_value(ev) }),
        PlanarityVerdict::Unknown { best_trace, lower_bound, oracle_planar } => json!({
            "status": "unknown",
            "best_trace": best_trace.to_string(),
            "lower_bound": lower_bound.to_string(),
            "minor_search_found_nothing": oracle_planar,
        }),
    }
}

fn find_dual(g: &MultiGraph, opts: &GlobalOpts) -> Result<Result<DualCertificate, PlanarityVerdict>, CliError> {
    match decide_planarity(g, &mut Budget::new(opts.budget), opts.seed)? {
        PlanarityVerdict::Planar(c) => Ok(Ok(*c)),
        other => Ok(Err(other)),
    }
}

fn dot(g: &MultiGraph, title: &str) -> String {
    let mut s = format!("digraph \"{}\" {{\n", title.replace('"', "'"));
    for v in 0..g.num_vertices() {
        s.push_str(&format!("  v{v};\n"));
    }
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        s.push_str(&format!("  v{a} -> v{b} [label=\"e{e}\"];\n"));
    }
    s.push('}');
    s
}

pub fn run(cmd: &Command, opts: &GlobalOpts) -> Result<Output, CliError> {
    let ok = |v: Value| Ok(Output::Json(v, 0));
    match cmd {
        Command::Laplacian { graph } => {
            let g = load_graph(graph)?;
            ok(json!({ "laplacian": matrix_to_value(&laplacian(&g)) }))
        }
        Command::ReducedLaplacian { graph } => {
            let g = load_graph(graph)?;
            let spec = spec_for(&g, opts)?;
            ok(json!({ "v0": spec.v0(), "reduced_laplacian": matrix_to_value(&reduced_laplacian(&g, &spec)?) }))
        }
        Command::Incidence { graph } => {
            let g = load_graph(graph)?;
            let spec = spec_for(&g, opts)?;
            let o = Orientation::default_for(&g);
            ok(json!({
                "v0": spec.v0(),
                "incidence": matrix_to_value(&incidence(&g, &o)?),
                "reduced_incidence": matrix_to_value(&reduced_incidence(&g, &o, &spec)?),
            }))
        }
        Command::CutBlock { graph } => {
            let g = load_graph(graph)?;
            let (f, spec) = (forest_for(&g, opts)?, spec_for(&g, opts)?);
            let cb = cut_block(&g, &Orientation::default_for(&g), &f, &spec)?;
            ok(json!({
                "forest": cb.forest_edges,
                "cotree": cb.cotree_edges,
                "v0": spec.v0(),
                "cut_block": matrix_to_value(&cb.matrix),
            }))
        }
        Command::FlowMatrix { graph } => {
            let g = load_graph(graph)?;
            let (f, spec) = (forest_for(&g, opts)?, spec_for(&g, opts)?);
            let o = Orientation::default_for(&g);
            ok(json!({
                "forest": f.forest_edges(),
                "flow_matrix": matrix_to_value(&flow_matrix(&g, &o, &f, &spec)?),
                "superbase": matrix_to_value(&superbase_matrix(&g, &o, &f, &spec)?),
            }))
        }
        Command::DualLaplacian { graph } => {
            let g = load_graph(graph)?;
            let (f, spec) = (forest_for(&g, opts)?, spec_for(&g, opts)?);
            let pair = reduced_dual_laplacian(&g, &Orientation::default_for(&g), &f, &spec, None)?;
            ok(json!({
                "forest": f.forest_edges(),
                "reduced": matrix_to_value(&pair.reduced),
                "unreduced": matrix_to_value(&pair.unreduced),
                "trace": pair.unreduced.trace().to_string(),
            }))
        }
        Command::Snf { matrix } => {
            let a = load_matrix(matrix)?;
            let snf = smith_normal_form(&a);
            ok(json!({
                "diag": snf.diag.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                "rank": rank(&a),
                "left": matrix_to_value(snf.left.matrix()),
                "right": matrix_to_value(snf.right.matrix()),
            }))
        }
        Command::CheckCongruence { a, b } => {
            let (a, b) = (load_matrix(a)?, load_matrix(b)?);
            let v = decide_congruence(&a, &b, &mut Budget::new(opts.budget))?;
            let code = match v.status {
                CongruenceStatus::Congruent => 0,
                CongruenceStatus::NotCongruent => EXIT_NO,
                CongruenceStatus::Unknown => EXIT_UNKNOWN,
            };
            Ok(Output::Json(verdict_to_value(&v), code))
        }
        Command::Check2iso { g1, g2 } => {
            let (a, b) = (load_graph(g1)?, load_graph(g2)?);
            if a.loop_count() != b.loop_count() {
                // Loops ride along with any bijection, so unequal counts settle it.
                let beta = decide_2_isomorphism_bruteforce(&a, &b, &mut Budget::new(opts.budget))?;
                return Ok(Output::Json(json!({ "two_isomorphic": "no", "beta": beta, "reason": "loop counts differ" }), EXIT_NO));
            }
            let r = property_x_report(&a, &b, &mut Budget::new(opts.budget))?;
            let conditions = r.conditions();
            let decided = conditions.iter().copied().find(|d| d.is_decided()).unwrap_or(Decision::Unknown);
            let v = json!({
                "two_isomorphic": decided,
                "conditions": {
                    "reduced_laplacians_congruent": conditions[0],
                    "reduced_incidences_strictly_equivalent": conditions[1],
                    "incidences_loosely_equivalent": conditions[2],
                    "two_isomorphic_by_search": conditions[3],
                },
                "beta": r.two_isomorphism,
                "congruence": verdict_to_value(&r.congruence),
                "constructive": r.constructive.as_ref().map(|c| json!({
                    "beta": c.beta,
                    "witness": matrix_to_value(c.witness.matrix()),
                    "strictly_row_equivalent": c.strictly_row_equivalent,
                })),
                "unreduced": r.unreduced,
                "consistent": r.consistent,
            });
            Ok(Output::Json(v, decision_code(decided)))
        }
        Command::VerifyProperty { tag, graph } => {
            let g = load_graph(graph)?;
            let r = verify_property(&g, tag, &mut Budget::new(opts.budget))?;
            let code = if r.passed { 0 } else { EXIT_NO };
            Ok(Output::Json(serde_json::to_value(&r).expect("report serializes"), code))
        }
        Command::Planarity { graph } => {
            let g = load_graph(graph)?;
            let v = decide_planarity(&g, &mut Budget::new(opts.budget), opts.seed)?;
            Ok(Output::Json(planarity_value(&v), decision_code(v.decision())))
        }
        Command::FindDual { graph } => {
            let g = load_graph(graph)?;
            match find_dual(&g, opts)? {
                Ok(c) => ok(certificate_to_value(&c)),
                Err(v) => {
                    let code = decision_code(v.decision());
                    Ok(Output::Json(planarity_value(&v), code))
                }
            }
        }
        Command::VerifyDual { g1, g2, beta } => {
            let (a, b) = (load_graph(g1)?, load_graph(g2)?);
            let beta = match beta {
                Some(text) => parse_indices(text, 'e', "beta")?,
                None => (0..a.num_edges()).collect(),
            };
            let check = verify_abstract_dual(&a, &b, &beta)?;
            let v = json!({
                "is_dual": check.is_dual,
                "forests_g1": check.forests1,
                "forests_g2": check.forests2,
                "forest_size_ok": check.forest_size_ok,
                "beta": beta,
            });
            Ok(Output::Json(v, if check.is_dual { 0 } else { EXIT_NO }))
        }
        Command::EmitDot { graph, dual } => {
            let g = load_graph(graph)?;
            if !dual {
                return Ok(Output::Text(dot(&g, g.name()), 0));
            }
            match find_dual(&g, opts)? {
                Ok(c) => {
                    // Dual edge `e` is the one matched with primal edge `e`.
                    let d = &c.dual_graph;
                    let ends = (0..g.num_edges()).map(|e| c.dual_orientation.ends(d, c.edge_bijection[e])).collect();
                    let labelled = MultiGraph::new(d.num_vertices(), ends)?;
                    Ok(Output::Text(dot(&labelled, &format!("dual of {}", g.name())), 0))
                }
                Err(v) => {
                    let code = decision_code(v.decision());
                    Ok(Output::Json(planarity_value(&v), code))
                }
            }
        }
    }
}
