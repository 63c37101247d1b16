//! End-to-end tests of the compiled binary: exit codes, output formats,
//! and byte-level determinism.

use std::process::{Command, Output};

fn treecount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treecount"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn validate_k4_is_not_bipartite() {
    let out = treecount(&["validate", "--graph", "k4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\"is_bipartite\": false"));
    assert!(text.contains("\"schema_version\": 1"));
    assert!(text.contains("\"odd_cycle_witness\""));
}

#[test]
fn validate_k33_is_bipartite() {
    let out = treecount(&["validate", "--graph", "k33"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("\"is_bipartite\": true"));
}

#[test]
fn validate_rejects_a_broken_graph_with_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "0 1\n1 2\n").unwrap();
    let out = treecount(&["validate", "--graph", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn usage_error_exits_2() {
    let out = treecount(&["count", "--graph", "k4", "--n-max", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flag_exits_2() {
    let out = treecount(&["validate", "--graph", "k4", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classes_k4_mu_max_3_lists_eight() {
    let out = treecount(&["classes", "--graph", "k4", "--mu-max", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.matches("\"mu\"").count(), 8);
}

#[test]
fn count_emits_csv_with_parity_steps() {
    let out = treecount(&[
        "count",
        "--graph",
        "k4",
        "--class-walk",
        "0 1 2 0",
        "--n-max",
        "15",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,count,normalized");
    assert_eq!(lines.len(), 17);
    // zero below the class length, first jump exactly at n = 3
    assert!(lines[1].starts_with("0,0,"));
    assert!(lines[3].starts_with("2,0,"));
    assert!(lines[4].starts_with("3,1,"));
    // no jump at even n
    assert!(lines[5].starts_with("4,1,"));
    assert!(lines[16].starts_with("15,51,"));
}

#[test]
fn count_by_word_matches_count_by_walk() {
    let by_walk = treecount(&[
        "count", "--graph", "k4", "--class-walk", "0 1 2 0", "--n-max", "9",
    ]);
    let by_word = treecount(&[
        "count", "--graph", "k4", "--class-word", "1", "--n-max", "9",
    ]);
    assert!(by_walk.status.success() && by_word.status.success());
    assert_eq!(stdout(&by_walk), stdout(&by_word));
}

#[test]
fn identical_configs_are_byte_identical() {
    let args = [
        "report",
        "--graph",
        "k4",
        "--class-walk",
        "0 1 2 0",
        "--n-max",
        "13",
    ];
    let a = treecount(&args);
    let b = treecount(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn budget_exceeded_exits_4() {
    let out = treecount(&[
        "count",
        "--graph",
        "k4",
        "--class-walk",
        "0 1 2 0",
        "--n-max",
        "30",
        "--budget",
        "1000",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn spectral_check_reports_tolerance_success() {
    let out = treecount(&[
        "spectral-check",
        "--graph",
        "k4",
        "--class-walk",
        "0 1 2 0",
        "--truncation",
        "15",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.matches("\"within_tolerance\": true").count(), 3);
    assert!(!text.contains("\"within_tolerance\": false"));
}

#[test]
fn asymptotics_reports_constants() {
    let out = treecount(&[
        "asymptotics",
        "--graph",
        "k4",
        "--class-walk",
        "0 1 2 0",
        "--n-max",
        "13",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\"theorem_constant\": 0.75"));
    assert!(text.contains("\"ratio_target\": 2.0"));
}

#[test]
fn offset_basepoint_is_accepted_and_must_start_at_base() {
    let ok = treecount(&[
        "count",
        "--graph",
        "k4",
        "--class-walk",
        "0 1 2 0",
        "--offset-walk",
        "0 3 1",
        "--n-max",
        "9",
    ]);
    assert!(ok.status.success());
    let bad = treecount(&[
        "count",
        "--graph",
        "k4",
        "--class-walk",
        "0 1 2 0",
        "--offset-walk",
        "1 3",
        "--n-max",
        "9",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let out = treecount(&[
        "count",
        "--graph",
        "k4",
        "--class-walk",
        "0 1 2 0",
        "--n-max",
        "9",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("n,count,normalized\n"));
}
