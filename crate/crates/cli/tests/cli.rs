use std::path::PathBuf;
use std::process::{Command, Output};

use lapdual::duality::verify_abstract_dual;
use lapdual::json::{parse_graph, parse_matrix};
use lapdual::laplacian::{laplacian, reduced_laplacian, ReductionSpec};
use lapdual::{fixtures, IntMatrix, MultiGraph};
use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn lapdual(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lapdual"))
        .args(args)
        .env_remove("LAPDUAL_BUDGET")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn matrix_at(v: &Value, key: &str) -> IntMatrix {
    parse_matrix(&v[key].to_string()).unwrap()
}

#[test]
fn planarity_of_example2_certifies_a_four_vertex_dual() {
    let out = lapdual(&["planarity", &data("example2.json")]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["status"], "planar");
    let dual = parse_graph(&v["certificate"]["dual_graph"].to_string()).unwrap();
    assert_eq!((dual.num_vertices(), dual.num_edges()), (4, 9));
    let beta: Vec<usize> = serde_json::from_value(v["certificate"]["beta"].clone()).unwrap();
    assert!(verify_abstract_dual(&fixtures::example2(), &dual, &beta).unwrap().is_dual);
    assert_eq!(v["certificate"]["trace"], "16");
}

#[test]
fn g_versus_a_squared_g_is_not_2_isomorphic() {
    let out = lapdual(&["check-2iso", &data("k3.json"), &data("k3_times4.json")]);
    assert_eq!(code(&out), 1);
    let v = json_of(&out);
    assert_eq!(v["two_isomorphic"], "no");
    for c in ["reduced_laplacians_congruent", "reduced_incidences_strictly_equivalent", "incidences_loosely_equivalent", "two_isomorphic_by_search"] {
        assert_eq!(v["conditions"][c], "no", "{c}");
    }
    assert_eq!(v["congruence"]["separating_invariant"]["det"]["b"], "48");
}

#[test]
fn example2_is_2_isomorphic_to_itself() {
    let out = lapdual(&["check-2iso", &data("example2.json"), &data("example2.json")]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_of(&out)["constructive"]["strictly_row_equivalent"], true);
}

#[test]
fn snf_of_zero_matrix() {
    let out = lapdual(&["snf", &data("zero.json")]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["diag"], serde_json::json!(["0", "0", "0"]));
    assert_eq!(v["rank"], 0);
}

#[test]
fn matrices_round_trip_to_library_values() {
    let g = fixtures::example3();
    let out = lapdual(&["laplacian", &data("example3.json")]);
    assert_eq!(matrix_at(&json_of(&out), "laplacian"), laplacian(&g));
    let out = lapdual(&["--v0", "v4", "reduced-laplacian", &data("example3.json")]);
    let v = json_of(&out);
    assert_eq!(v["v0"], serde_json::json!([4]));
    assert_eq!(matrix_at(&v, "reduced_laplacian"), reduced_laplacian(&g, &ReductionSpec::new(&g, &[4]).unwrap()).unwrap());
}

#[test]
fn example1_dual_laplacian_with_explicit_forest() {
    let out = lapdual(&["dual-laplacian", "--forest", "e0", &data("example1.json")]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(matrix_at(&v, "reduced"), IntMatrix::from_rows(&[[2, 1], [1, 2]]));
    assert_eq!(matrix_at(&v, "unreduced"), IntMatrix::from_rows(&[[2, 1, -3], [1, 2, -3], [-3, -3, 6]]));
}

#[test]
fn example2_matrices_with_printed_forest_and_v0() {
    let args = ["--forest", "e0,e1,e3,e4,e5,e7", "--v0", "v2"];
    let out = lapdual(&[&args[..], &["flow-matrix", &data("example2.json")]].concat());
    let v = json_of(&out);
    let printed = IntMatrix::from_rows(&[
        [-1, 1, -1, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, -1, 1, -1, 0, 0],
        [0, 0, 0, 0, 1, -1, 0, 1, -1],
    ]);
    assert_eq!(matrix_at(&v, "flow_matrix"), printed);
    let out = lapdual(&[&args[..], &["cut-block", &data("example2.json")]].concat());
    assert_eq!(json_of(&out)["cotree"], serde_json::json!([2, 6, 8]));
    let out = lapdual(&[&args[..], &["incidence", &data("example2.json")]].concat());
    assert_eq!(matrix_at(&json_of(&out), "reduced_incidence").rows(), 6);
}

#[test]
fn congruence_verdicts_and_exit_codes() {
    let out = lapdual(&["check-congruence", &data("a2.json"), &data("a2_twin.json")]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    let w = matrix_at(&v, "witness");
    let a = parse_matrix(&std::fs::read_to_string(data("a2.json")).unwrap()).unwrap();
    let b = parse_matrix(&std::fs::read_to_string(data("a2_twin.json")).unwrap()).unwrap();
    assert_eq!(a.congruent_by(&w).unwrap(), b);
    let out = lapdual(&["check-congruence", &data("a2.json"), &data("diag13.json")]);
    assert_eq!(code(&out), 1);
    assert!(json_of(&out)["separating_invariant"].is_object());
}

#[test]
fn nonplanar_inputs() {
    let out = lapdual(&["planarity", &data("k33.json")]);
    assert_eq!(code(&out), 1);
    assert_eq!(json_of(&out)["evidence"]["kind"], "K33");
    let out = lapdual(&["find-dual", &data("k5.json")]);
    assert_eq!(code(&out), 1);
}

#[test]
fn exhausted_budget_is_unknown() {
    let out = lapdual(&["--budget", "0", "planarity", &data("k5.json")]);
    assert_eq!(code(&out), 2);
    assert_eq!(json_of(&out)["status"], "unknown");
    let out = Command::new(env!("CARGO_BIN_EXE_lapdual"))
        .args(["planarity", &data("k5.json")])
        .env("LAPDUAL_BUDGET", "0")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_property_and_dual() {
    for tag in ["I", "IV", "VII", "V*", "IX*"] {
        let out = lapdual(&["verify-property", tag, &data("example2.json")]);
        assert_eq!(code(&out), 0, "{tag}");
        assert_eq!(json_of(&out)["passed"], true);
    }
    let out = lapdual(&["verify-dual", &data("example2.json"), &data("example2_dual.json")]);
    assert_eq!(code(&out), 0);
    let out = lapdual(&["verify-dual", &data("k3.json"), &data("k3.json")]);
    assert_eq!(code(&out), 1);
    assert_eq!(json_of(&out)["forest_size_ok"], false);
    let out = lapdual(&["verify-dual", "--beta", "e2,e1,e0", &data("example1.json"), &data("k3.json")]);
    assert_eq!(code(&out), 0);
}

#[test]
fn usage_errors_exit_64_with_json() {
    for args in [
        vec!["no-such-command"],
        vec!["--forest", "e0,e1", "cut-block", "K3_PLACEHOLDER"],
        vec!["--forest", "x?", "cut-block", "K3_PLACEHOLDER"],
        vec!["--v0", "v0,v1", "reduced-laplacian", "K3_PLACEHOLDER"],
        vec!["verify-property", "XII", "K3_PLACEHOLDER"],
    ] {
        let k3 = data("example1.json");
        let args: Vec<&str> = args.iter().map(|a| if *a == "K3_PLACEHOLDER" { k3.as_str() } else { a }).collect();
        let out = lapdual(&args);
        assert_eq!(code(&out), 64, "{args:?}");
        assert_eq!(json_of(&out)["error"]["kind"], "usage");
    }
}

#[test]
fn malformed_input_exits_65_with_json() {
    for path in [data("broken.json"), data("missing.json")] {
        let out = lapdual(&["laplacian", &path]);
        assert_eq!(code(&out), 65, "{path}");
        assert_eq!(json_of(&out)["error"]["exit_code"], 65);
    }
    let out = lapdual(&["check-congruence", &data("zero.json"), &data("a2.json")]);
    assert_eq!(code(&out), 65);
}

#[test]
fn identical_runs_are_byte_identical() {
    for args in [
        vec!["--seed", "7", "planarity", "example3.json"],
        vec!["find-dual", "example2.json"],
        vec!["check-2iso", "example2.json", "example2.json"],
    ] {
        let args: Vec<String> = args.iter().map(|a| if a.ends_with(".json") { data(a) } else { a.to_string() }).collect();
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(lapdual(&args).stdout, lapdual(&args).stdout, "{args:?}");
    }
}

#[test]
fn out_flag_and_dot() {
    let dir = std::env::temp_dir().join(format!("lapdual-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("dual.dot");
    let out = lapdual(&["emit-dot", "--dual", "--out", path.to_str().unwrap(), &data("example1.json")]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("digraph") && text.matches("->").count() == 3);
    let out = lapdual(&["emit-dot", &data("example2.json")]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().matches("->").count(), 9);
}

#[test]
fn emitted_graph_json_round_trips() {
    let out = lapdual(&["find-dual", &data("example3.json")]);
    let v = json_of(&out);
    let text = v["dual_graph"].to_string();
    let dual: MultiGraph = parse_graph(&text).unwrap();
    assert_eq!(serde_json::to_value(&dual).unwrap(), v["dual_graph"]);
    assert_eq!(v["trace"], "18");
}
