//! End-to-end tests of the `lpcert` binary: JSON output, exit codes, and the
//! certificate round trip.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lpcert"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn json_of(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("stdout should be JSON")
}

#[test]
fn solve_degen2_default_order() {
    let out = bin()
        .arg("solve")
        .arg(fixture("degen2.lp"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["status"], "optimal");
    assert_eq!(doc["x"], serde_json::json!(["1", "2"]));
    assert_eq!(doc["objective"], "0");
    assert_eq!(doc["working_set"], serde_json::json!([2, 3]));
    assert_eq!(doc["lambda"], serde_json::json!(["0", "1/3", "2/3"]));
}

#[test]
fn solve_degen2_swapped_order() {
    let out = bin()
        .args(["solve", "--epsilon-order", "2,1,3"])
        .arg(fixture("degen2.lp"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["working_set"], serde_json::json!([1, 3]));
    assert_eq!(doc["lambda"], serde_json::json!(["1/2", "0", "1/2"]));
}

#[test]
fn solve_work6_objective() {
    let out = bin()
        .arg("solve")
        .arg(fixture("work6.lp"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["objective"], "7");
}

#[test]
fn certificate_round_trips_through_certify() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let out = bin()
        .arg("solve")
        .arg(fixture("work6.lp"))
        .arg("--out")
        .arg(&cert)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();

    let join = |key: &str| -> String {
        doc[key]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_str().unwrap())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let x_file = dir.path().join("x.vec");
    let l_file = dir.path().join("lambda.vec");
    std::fs::write(&x_file, join("x")).unwrap();
    std::fs::write(&l_file, join("lambda")).unwrap();

    let out = bin()
        .arg("certify")
        .arg(fixture("work6.lp"))
        .arg("--x")
        .arg(&x_file)
        .arg("--lambda")
        .arg(&l_file)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "round trip must verify");
    assert_eq!(json_of(&out)["verdict"], "optimal");
}

#[test]
fn certify_rejects_sign_violation_with_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let x_file = dir.path().join("x.vec");
    let l_file = dir.path().join("lambda.vec");
    std::fs::write(&x_file, "1 2").unwrap();
    std::fs::write(&l_file, "2 -1 0").unwrap();
    let out = bin()
        .arg("certify")
        .arg(fixture("degen2.lp"))
        .arg("--x")
        .arg(&x_file)
        .arg("--lambda")
        .arg(&l_file)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    let doc = json_of(&out);
    assert_eq!(doc["checks"]["sign"], false);
    assert_eq!(doc["checks"]["feasible"], true);
}

#[test]
fn certify_rejects_infeasible_point_with_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let x_file = dir.path().join("x.vec");
    let l_file = dir.path().join("lambda.vec");
    std::fs::write(&x_file, "0 0").unwrap();
    std::fs::write(&l_file, "0 1/3 2/3").unwrap();
    let out = bin()
        .arg("certify")
        .arg(fixture("degen2.lp"))
        .arg("--x")
        .arg(&x_file)
        .arg("--lambda")
        .arg(&l_file)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(json_of(&out)["checks"]["feasible"], false);
}

#[test]
fn vertices_of_degen2() {
    let out = bin()
        .arg("vertices")
        .arg(fixture("degen2.lp"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out), serde_json::json!([["1", "2"]]));
}

#[test]
fn workingset_at_both_optimal_vertices() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    bin()
        .arg("solve")
        .arg(fixture("work6.lp"))
        .arg("--out")
        .arg(&cert)
        .output()
        .unwrap();

    let out = bin()
        .args(["workingset"])
        .arg(fixture("work6.lp"))
        .args(["--at", "2,1,1", "--cert"])
        .arg(&cert)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out), serde_json::json!([1, 2, 3]));

    let out = bin()
        .args(["workingset"])
        .arg(fixture("work6.lp"))
        .args(["--at", "3,1/2,1", "--cert"])
        .arg(&cert)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out), serde_json::json!([1, 2, 5]));
}

#[test]
fn workingset_rejects_non_optimal_point() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    bin()
        .arg("solve")
        .arg(fixture("work6.lp"))
        .arg("--out")
        .arg(&cert)
        .output()
        .unwrap();
    // (4,2,3) is feasible with objective 17 > 7.
    let out = bin()
        .args(["workingset"])
        .arg(fixture("work6.lp"))
        .args(["--at", "4,2,2", "--cert"])
        .arg(&cert)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn farkas_on_fixture_files() {
    let out = bin()
        .arg("farkas")
        .arg(fixture("A.mat"))
        .arg(fixture("c.vec"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["case"], 1);
    assert_eq!(doc["witness"].as_array().unwrap().len(), 6);
}

#[test]
fn descent_outputs_trace() {
    let out = bin()
        .args(["descent", "--start", "4,2"])
        .arg(fixture("degen2.lp"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["outcome"], "vertex");
    assert_eq!(doc["vertex"], serde_json::json!(["1", "2"]));
    let ranks: Vec<u64> = doc["trace"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["active_rank"].as_u64().unwrap())
        .collect();
    assert!(ranks.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn solve_with_oracle_check_agrees() {
    let out = bin()
        .args(["solve", "--oracle-check"])
        .arg(fixture("work6.lp"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["objective"], "7");
}

#[test]
fn descent_finds_its_own_starting_point() {
    let out = bin()
        .arg("descent")
        .arg(fixture("work6.lp"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["outcome"], "vertex");
}

#[test]
fn solve_rejects_misdimensioned_start() {
    let out = bin()
        .args(["solve", "--start", "4"])
        .arg(fixture("degen2.lp"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exit_codes_for_unbounded_and_infeasible() {
    let dir = tempfile::tempdir().unwrap();
    let unbounded = dir.path().join("unbounded.lp");
    std::fs::write(&unbounded, "vars 1\nmin -1\nge 1 >= 0\n").unwrap();
    let out = bin().arg("solve").arg(&unbounded).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["status"], "unbounded");

    let infeasible = dir.path().join("infeasible.lp");
    std::fs::write(&infeasible, "vars 1\nmin 1\nge 1 >= 1\nge -1 >= 0\n").unwrap();
    let out = bin().arg("solve").arg(&infeasible).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let doc = json_of(&out);
    assert_eq!(doc["status"], "infeasible");
    assert_eq!(doc["witness"]["s_star"], "1/2");
}

#[test]
fn parse_error_exits_1_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.lp");
    std::fs::write(&bad, "vars 2\nmin 1 0.5\nge 1 1 >= 0\n").unwrap();
    let out = bin().arg("solve").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "stderr: {err}");
}

#[test]
fn usage_error_exits_1() {
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn subset_cap_env_and_flag() {
    let out = bin()
        .args(["vertices", "--subset-cap", "3"])
        .arg(fixture("work6.lp"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));

    let out = bin()
        .arg("vertices")
        .arg(fixture("work6.lp"))
        .env("LPCERT_SUBSET_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    // Explicit flag wins over the environment.
    let out = bin()
        .args(["vertices", "--subset-cap", "1000"])
        .arg(fixture("work6.lp"))
        .env("LPCERT_SUBSET_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn render_writes_svg_with_vertex_markers() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("degen2.svg");
    let out = bin()
        .arg("render")
        .arg(fixture("degen2.lp"))
        .arg("--out")
        .arg(&svg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<?xml"));
    assert_eq!(text.matches("class=\"vertex\"").count(), 1);

    let out = bin()
        .args(["render", "--epsilon", "1/2", "--epsilon-order", "2,1,3"])
        .arg(fixture("degen2.lp"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("class=\"vertex\"").count(), 2);
}

#[test]
fn render_rejects_three_variables() {
    let out = bin()
        .arg("render")
        .arg(fixture("work6.lp"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
