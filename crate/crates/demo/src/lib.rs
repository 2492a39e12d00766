//! Browser bindings. Every function takes graph JSON text and returns JSON
//! text; errors come back as `{"error": "..."}` so the page never has to
//! catch a thrown value.

use lapdual::duality::{decide_planarity, superbase_trace_minimize, PlanarityVerdict};
use lapdual::graph::{maximal_forest, MultiGraph, Orientation};
use lapdual::json::{certificate_to_value, evidence_to_value, graph_to_value, matrix_to_value, parse_graph};
use lapdual::laplacian::{laplacian, reduced_dual_laplacian, reduced_laplacian, superbase_matrix, ReductionSpec};
use lapdual::matrix::det_bareiss;
use lapdual::Budget;
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

fn respond(r: lapdual::Result<Value>) -> String {
    let v = r.unwrap_or_else(|e| json!({ "error": e.to_string() }));
    serde_json::to_string(&v).expect("value serializes")
}

fn view(g: &MultiGraph) -> lapdual::Result<Value> {
    let o = Orientation::default_for(g);
    let f = maximal_forest(g);
    let spec = ReductionSpec::default_for(g);
    let pair = reduced_dual_laplacian(g, &o, &f, &spec, None)?;
    Ok(json!({
        "graph": graph_to_value(g),
        "forest": f.forest_edges(),
        "v0": spec.v0(),
        "laplacian": matrix_to_value(&laplacian(g)),
        "reduced_laplacian": matrix_to_value(&reduced_laplacian(g, &spec)?),
        "dual_reduced": matrix_to_value(&pair.reduced),
        "dual_unreduced": matrix_to_value(&pair.unreduced),
        "det": det_bareiss(&pair.reduced)?.to_string(),
    }))
}

/// Laplacian, reduced Laplacian and dual Laplacian for the default forest.
#[wasm_bindgen]
pub fn laplacian_view(graph_json: &str) -> String {
    respond(parse_graph(graph_json).and_then(|g| view(&g)))
}

/// Planarity verdict: a dual with its certificate, or a Kuratowski minor.
#[wasm_bindgen]
pub fn planarity(graph_json: &str, budget: u32, seed: u32) -> String {
    respond(parse_graph(graph_json).and_then(|g| {
        let v = decide_planarity(&g, &mut Budget::new(budget as u64), seed as u64)?;
        Ok(match v {
            PlanarityVerdict::Planar(c) => json!({ "status": "planar", "certificate": certificate_to_value(&c) }),
            PlanarityVerdict::Nonplanar(ev) => json!({ "status": "nonplanar", "evidence": evidence_to_value(&ev) }),
            PlanarityVerdict::Unknown { best_trace, lower_bound, .. } => json!({
                "status": "unknown",
                "best_trace": best_trace.to_string(),
                "lower_bound": lower_bound.to_string(),
            }),
        })
    }))
}

fn descent(g: &MultiGraph, budget: u64, seed: u64) -> lapdual::Result<Value> {
    let o = Orientation::default_for(g);
    let spec = ReductionSpec::default_for(g);
    let state = superbase_trace_minimize(g, &o, &maximal_forest(g), &spec, &mut Budget::new(budget), seed)?;
    // Replay the winning run so the page can animate it.
    let start = lapdual::ForestCertificate::new(g, &state.start_forest)?;
    let mut f_hat = superbase_matrix(g, &o, &start, &spec)?;
    let mut traces = vec![f_hat.gram().trace().to_string()];
    for mv in &state.move_log {
        mv.apply(&mut f_hat);
        traces.push(f_hat.gram().trace().to_string());
    }
    Ok(json!({
        "start_forest": state.start_forest,
        "moves": state.move_log.iter().map(|m| [m.i as i64, m.j as i64, m.d as i64, m.s as i64]).collect::<Vec<_>>(),
        "traces": traces,
        "lower_bound": state.lower_bound.to_string(),
        "reached_bound": state.reached_bound,
        "restarts": state.restarts,
        "f_hat": matrix_to_value(&state.f_hat),
    }))
}

/// Superbase trace descent: the trace after each move of the best run.
#[wasm_bindgen]
pub fn descent_trace(graph_json: &str, budget: u32, seed: u32) -> String {
    respond(parse_graph(graph_json).and_then(|g| descent(&g, budget as u64, seed as u64)))
}
