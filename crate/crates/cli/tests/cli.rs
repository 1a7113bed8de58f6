use std::fs;
use std::path::PathBuf;
use std::process::Command;

use vsep_cli::{run, EXIT_INPUT, EXIT_INVALID, EXIT_USAGE};

fn call(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut input = stdin.as_bytes();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut argv = vec!["vsep"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut input, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("vsep-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

#[test]
fn generated_grid_solves_to_a_valid_separator() {
    let (code, graph, _) = call(&["gen", "grid", "4", "4"], "");
    assert_eq!(code, 0);
    let (code, report, _) = call(&["solve", "--c", "0.3333", "--epsilon", "0.5", "--seed", "7"], &graph);
    assert_eq!(code, 0);
    assert!(report.contains("\nA:") && report.contains("\nC:"));
    let g = scratch("grid.txt", &graph);
    let (code, out, _) = call(&["validate", g.to_str().unwrap()], &report);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("valid"));
}

#[test]
fn structured_reports_validate_and_are_reproducible() {
    let (_, graph, _) = call(&["gen", "blobs", "5", "5", "2", "--max-weight", "9", "--seed", "3"], "");
    let args = ["solve", "--format", "structured", "--seed", "11"];
    let (code, first, _) = call(&args, &graph);
    assert_eq!(code, 0);
    let (_, second, _) = call(&args, &graph);
    assert_eq!(first, second);
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert!(v["brute_opt"].is_u64());
    let g = scratch("blobs.txt", &graph);
    let (code, _, _) = call(&["validate", g.to_str().unwrap()], &first);
    assert_eq!(code, 0);
}

#[test]
fn brute_force_on_k4() {
    let (_, graph, _) = call(&["gen", "complete", "4"], "");
    let (code, out, _) = call(&["brute", "--c", "0.3333"], &graph);
    assert_eq!(code, 0);
    assert!(out.starts_with("opt 2\n"));
}

#[test]
fn tampered_separator_names_the_edge() {
    let (_, graph, _) = call(&["gen", "path", "6"], "");
    let g = scratch("path.txt", &graph);
    let (code, out, err) = call(&["validate", g.to_str().unwrap(), "--c", "1/3"], "A: 0 1 2\nB: 3 4 5\nC:\n");
    assert_eq!(code, EXIT_INVALID);
    assert!(out.contains("edge {2, 3}"), "{out}");
    assert!(err.contains("edge {2, 3}"));
}

#[test]
fn recorded_cost_is_checked() {
    let (_, graph, _) = call(&["gen", "path", "5"], "");
    let g = scratch("path5.txt", &graph);
    let (code, out, _) = call(&["validate", g.to_str().unwrap()], "cost: 0\nA: 0 1\nB: 3 4\nC: 2\n");
    assert_eq!(code, EXIT_INVALID);
    assert!(out.contains("recorded cost 0"));
}

#[test]
fn flow_prints_value_cut_and_paths() {
    let net = "p 4 5\ns 0\nt 3\na 0 1 3\na 0 2 2\na 1 2 1\na 1 3 2\na 2 3 3\n";
    let (code, out, _) = call(&["flow"], net);
    assert_eq!(code, 0);
    assert!(out.starts_with("value: 5\n"));
    assert!(out.contains("sink_side: 3\n"));
    let total: i64 = out
        .lines()
        .filter_map(|l| l.split("amount ").nth(1))
        .map(|r| r.split_whitespace().next().unwrap().parse::<i64>().unwrap())
        .sum();
    assert_eq!(total, 5);
}

#[test]
fn bench_emits_one_row_per_epsilon() {
    let (_, graph, _) = call(&["gen", "grid", "3", "4"], "");
    let (code, out, _) = call(&["bench", "--epsilons", "1,0.5,0.3"], &graph);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 4);
}

#[test]
fn epsilon_outside_the_window_is_clamped_with_a_warning() {
    let (_, graph, _) = call(&["gen", "path", "10"], "");
    let (code, out, err) = call(&["solve", "--epsilon", "5"], &graph);
    assert_eq!(code, 0);
    assert!(err.contains("warning: epsilon 5"));
    assert!(out.contains("epsilon: 1\n"));
}

#[test]
fn usage_and_input_errors_have_distinct_codes() {
    assert_eq!(call(&["frobnicate"], "").0, EXIT_USAGE);
    assert_eq!(call(&["solve", "--c", "0.7"], "").0, EXIT_USAGE);
    assert_eq!(call(&["gen", "grid", "4"], "").0, EXIT_USAGE);
    assert_eq!(call(&["solve"], "p 2 1\ne 0 7\n").0, EXIT_INPUT);
    assert_eq!(call(&["solve", "/nonexistent/graph.txt"], "").0, EXIT_INPUT);
    assert_eq!(call(&["brute", "--cap", "4"], "p 6 0\n").0, EXIT_INPUT);
}

#[test]
fn binary_exit_status_matches() {
    let bin = env!("CARGO_BIN_EXE_vsep");
    let status = Command::new(bin).args(["gen", "star"]).output().unwrap().status;
    assert_eq!(status.code(), Some(EXIT_USAGE));
    let out = Command::new(bin).args(["gen", "star", "4"]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("p 5 4"));
}
