use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn firefly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_firefly")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn simulate_writes_trace_with_sync_time() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = firefly(&["simulate", "--family", "path:2", "--n", "6", "--config", "2,5", "--trace", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let trace: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(trace["sync_time"], 13);
    assert_eq!(trace["b"], 2);
    assert_eq!(trace["steps"][0], serde_json::json!([2, 5]));
    assert_eq!(json(&out)["sync_time"], 13);
}

#[test]
fn csv_rows_run_to_sync_time() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let out = firefly(&[
        "simulate", "--family", "path:2", "--n", "6", "--config", "2,5", "--trace", path.to_str().unwrap(), "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,x0,x1");
    assert_eq!(lines[1], "0,2,5");
    assert_eq!(lines.last().unwrap(), &"13,3,3");
    assert_eq!(lines.len(), 15);
}

#[test]
fn constant_start_gives_single_csv_row() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let out = firefly(&[
        "simulate", "--family", "star:2", "--n", "3", "--config", "1,1,1", "--trace", path.to_str().unwrap(), "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 2);
}

#[test]
fn non_sync_trace_has_null_sync_time() {
    let out = firefly(&["simulate", "--family", "complete:3", "--n", "5", "--config", "0,2,4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["sync_time"].is_null());
    assert_eq!(v["period"], 6);
}

#[test]
fn dot_frames_one_file_per_step() {
    let dir = tempfile::tempdir().unwrap();
    let frames = dir.path().join("frames");
    let out = firefly(&[
        "simulate", "--family", "path:3", "--n", "3", "--config", "0,1,2", "--trace", frames.to_str().unwrap(), "--format",
        "dot-frames",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let steps = json(&out);
    let count = fs::read_dir(&frames).unwrap().count();
    assert_eq!(count as u64, steps["transient"].as_u64().unwrap() + steps["period"].as_u64().unwrap());
    let first = fs::read_to_string(frames.join("frame_0000.dot")).unwrap();
    assert!(first.contains("label=\"2: 2\""));
}

#[test]
fn k3_example_reports_cycle() {
    let out = firefly(&["paper-examples", "k3-three-states", "--q", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no sync, cycle length 6"));
    assert!(json(&out)["sync_time"].is_null());
}

#[test]
fn verify_tree_emits_csv_and_passes() {
    let out = firefly(&["verify-tree", "--n", "4", "--max-vertices", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("tree_id,"));
    // 1 + 1 + 1 + 2 + 3 + 6 trees
    assert_eq!(lines.count(), 14);
}

#[test]
fn verdict_and_usage_exit_codes() {
    assert_eq!(firefly(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(firefly(&["simulate", "--family", "path:2", "--n", "6", "--config", "2,x"]).status.code(), Some(1));
    assert_eq!(firefly(&["simulate", "--family", "path:2", "--n", "6", "--config", "2,5,1"]).status.code(), Some(1));
    assert_eq!(
        firefly(&["simulate", "--family", "path:2", "--edges", "x.txt", "--n", "6", "--config", "2,5"]).status.code(),
        Some(1)
    );
    assert_eq!(firefly(&["verify-blinking", "--family", "star:4", "--n", "4"]).status.code(), Some(0));
    assert_eq!(firefly(&["verify-degree", "--family", "star:4", "--n", "4", "--vertex", "0"]).status.code(), Some(1));
    assert_eq!(firefly(&["check-sync", "--family", "path:6", "--n", "6", "--budget", "10"]).status.code(), Some(1));
}

#[test]
fn quotient_and_branch_commands() {
    let out = firefly(&["quotient", "--family", "star:3", "--n", "6", "--config", "0,3,3,3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["first_mismatch"].is_null());
    let out = firefly(&["branch-width", "--family", "tree:0-1,0-2,0-3,3-4", "--n", "8", "--config", "1,1,2,5,5", "--center", "0"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["pass"], true);
}

#[test]
fn classify_and_irreducible() {
    let out = firefly(&["classify", "--family", "star:2", "--n", "4", "--config", "1,3,0", "--vertex", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["classification"].as_object().unwrap().values().any(|c| c == "recurrent"));
    let out = firefly(&["irreducible", "--family", "complete:3", "--n", "5", "--config", "0,2,4"]);
    assert_eq!(json(&out)["irreducible"], true);
}

#[test]
fn mc_is_reproducible_across_jobs() {
    let args = ["mc", "--family", "complete:3", "--n", "5", "--config", "0,2,4", "--p", "0.5", "--runs", "300", "--seed", "11"];
    let one = firefly(&[&["--jobs", "1"], &args[..]].concat());
    let four = firefly(&[&["--jobs", "4"], &args[..]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let v = json(&one);
    assert_eq!(v["runs"], 300);
    assert_eq!(v["absorbed"], 300);
}

#[test]
fn chain_reports_expected_time() {
    let out = firefly(&["chain", "--family", "path:2", "--n", "3", "--p", "0.5", "--from", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["state_count"], 7);
    assert_eq!(v["absorbing_states"], serde_json::json!(["sync"]));
    assert!((v["expected_from"].as_f64().unwrap() - 4.0).abs() < 1e-12);
}

#[test]
fn gen_formats_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("g.txt");
    assert_eq!(firefly(&["gen", "--family", "cycle:5", "--format", "edges", "--out", edges.to_str().unwrap()]).status.code(), Some(0));
    let out = firefly(&["check-sync", "--edges", edges.to_str().unwrap(), "--n", "3"]);
    assert_eq!(json(&out)["graph"]["edges"].as_array().unwrap().len(), 5);
    let graph = dir.path().join("g.json");
    firefly(&["gen", "--random", "6", "--seed", "4", "--out", graph.to_str().unwrap()]);
    let out = firefly(&["check-sync", "--graph-json", graph.to_str().unwrap(), "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let trees = json(&firefly(&["gen", "--trees", "5"]));
    assert_eq!(trees.as_array().unwrap().len(), 8);
    let dot = String::from_utf8(firefly(&["gen", "--family", "star:2", "--format", "dot"]).stdout).unwrap();
    assert!(dot.contains("0 -- 1;"));
}

#[test]
fn named_scenarios() {
    let out = firefly(&["paper-examples", "fig8-path", "--n", "6", "--m", "8"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["sync_time"], 49);
    let out = firefly(&["paper-examples", "n7-star"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["all_blink_in_cycle"], true);
    let out = firefly(&["paper-examples", "high-degree-tree", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["center_blinks_in_cycle"], false);
    let out = firefly(&["counterexample", "--kind", "k3-three-states", "--q", "3"]);
    assert_eq!(json(&out)["period"], 8);
}

#[test]
fn path_bounds_and_repeatable_output() {
    let a = firefly(&["path-bounds", "--n", "4", "--m", "3"]);
    let b = firefly(&["path-bounds", "--n", "4", "--m", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["max_sync_time"], 13);
    assert_eq!(v["upper_bound"], "28");
}
