//! End-to-end runs of the binary: subcommand output shapes, exit codes,
//! and byte-identical JSON across thread counts.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_butson"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8")
}

#[test]
fn construct_round_trips_through_verify() {
    let dir = std::env::temp_dir().join(format!("butson-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("f6.bh");
    let out = run(&[
        "construct",
        "fourier",
        "--q",
        "6",
        "--r",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = run(&["verify", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("BH(6, 6): verified"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn search_reports_the_known_f3_solution() {
    let f3 = data("f3.bh");
    let out = run(&[
        "--format",
        "json",
        "search",
        f3.to_str().unwrap(),
        "--k",
        "2",
        "--method",
        "exhaustive",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let solutions = v["solutions"].as_array().unwrap();
    assert!(solutions.iter().any(|s| {
        s["x"] == serde_json::json!([0, 1, 1]) && s["lambda"] == serde_json::json!([1, 2, 0])
    }));
}

#[test]
fn exclude_prints_the_table_row() {
    let out = run(&["exclude", "--n", "6", "--q", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "6 3 28 0;3;9;12;21;36 EXCLUDED\n");
    let out = run(&["exclude", "--n", "8", "--q", "4"]);
    assert!(stdout(&out).ends_with("NOT EXCLUDED\n"));
    let out = run(&["exclude", "--n", "2", "--q", "2", "--values"]);
    assert_eq!(stdout(&out), "0;4\n");
}

#[test]
fn covradius_of_f4_is_exact() {
    let out = run(&[
        "--format",
        "json",
        "covradius",
        data("f4.bh").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["value"], serde_json::json!(4.0));
    assert_eq!(v["exact"], serde_json::json!(true));
    assert_eq!(v["method"], serde_json::json!("slice-sweep"));
}

#[test]
fn bounds_row_for_bh88() {
    let out = run(&["bounds", "--n", "8", "--q", "8", "--dephased", "--bent"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("lower 10.343146"), "{text}");
    assert!(text.contains("upper 12.000000"), "{text}");
}

#[test]
fn empty_census_prints_zero_row() {
    let out = run(&["census", data("f2.bh").to_str().unwrap(), "--k", "1"]);
    assert!(out.status.success(), "no solutions is still success");
    assert_eq!(stdout(&out), "2 2 0 0\n");
}

#[test]
fn json_output_is_thread_count_invariant() {
    let f3 = data("f3.bh");
    let base = run(&[
        "--format",
        "json",
        "--threads",
        "1",
        "census",
        f3.to_str().unwrap(),
        "--k",
        "2",
    ]);
    let par = run(&[
        "--format",
        "json",
        "--threads",
        "4",
        "census",
        f3.to_str().unwrap(),
        "--k",
        "2",
    ]);
    assert!(base.status.success() && par.status.success());
    assert_eq!(base.stdout, par.stdout, "byte-identical JSON");
}

#[test]
fn exit_codes() {
    // budget exceeded -> 3
    let out = run(&[
        "--budget",
        "10",
        "search",
        data("f5.bh").to_str().unwrap(),
        "--k",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
    // unreadable input -> 2
    let out = run(&["verify", "/nonexistent/matrix.bh"]);
    assert_eq!(out.status.code(), Some(2));
    // malformed matrix -> 2
    let dir = std::env::temp_dir().join(format!("butson-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.bh");
    std::fs::write(&bad, "2 2\n0 0\n0 7\n").unwrap();
    let out = run(&["verify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn autgraph_exports() {
    let out = run(&[
        "autgraph",
        data("f2.bh").to_str().unwrap(),
        "--mode",
        "strong",
        "--k",
        "1",
        "--format",
        "dimacs",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("p digraph 12 24\n"));
    assert!(text.lines().nth(1).unwrap().starts_with("colors "));
    let out = run(&[
        "autgraph",
        data("f3.bh").to_str().unwrap(),
        "--format",
        "dot",
    ]);
    assert!(stdout(&out).contains("digraph butson"));
}

#[test]
fn construct_mm_from_spec_file() {
    let dir = std::env::temp_dir().join(format!("butson-mm-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let spec = dir.join("mm.json");
    std::fs::write(
        &spec,
        r#"{"q": 5, "m": 1, "variant": "plain", "k": 1, "phi": [0, 2, 4, 1, 3]}"#,
    )
    .unwrap();
    let out = bin()
        .args(["--format", "json", "construct", "mm", "--spec"])
        .arg(&spec)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["condition"], serde_json::json!(true), "φ(x)=2x, k=1");
    assert_eq!(v["n"], serde_json::json!(25));
    assert_eq!(v["lambda"], serde_json::json!([5, 0, 0, 0, 0]));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn seed_flag_is_accepted() {
    let out = run(&["--seed", "42", "verify", data("f2.bh").to_str().unwrap()]);
    assert!(out.status.success());
}
