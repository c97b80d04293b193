//! End-to-end tests of the `graphent` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_graphent"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn fixture_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("graphent-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn counts_csv_lists_fibonacci_numbers() {
    let dir = fixture_dir();
    let edges = dir.join("fib.edges");
    std::fs::write(&edges, "a a\na b\nb a\n").unwrap();
    let out = run(&[
        "counts",
        "--graph",
        edges.to_str().unwrap(),
        "--vertex",
        "a",
        "--class",
        "source",
        "--nmax",
        "5",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#') && !l.is_empty()).collect();
    assert_eq!(rows, vec!["n,count", "0,1", "1,2", "2,3", "3,5", "4,8", "5,13"]);
}

#[test]
fn sandwich_on_the_collapsing_family_is_exact() {
    let out = run(&[
        "sandwich", "--family", "salama_pp", "--p", "2", "--vertex", "0", "--nmax", "120",
        "--tol", "0.05", "--format", "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let data = &doc["data"];
    assert_eq!(data["exact"], serde_json::Value::Bool(true));
    let lower = data["lower_nats"].as_f64().unwrap();
    assert!((lower - 2f64.ln()).abs() < 0.05);
    // reproducibility header
    assert_eq!(doc["tool"], "graphent");
    assert!(doc["window_radius"].as_u64().is_some());
    assert!(data["provenance"].as_str().unwrap().contains("first-return"));
}

#[test]
fn verify_bundle_passes_on_the_eight_fold_family() {
    let out = run(&["verify", "--family", "salama_2_8", "--vertex", "0", "--nmax", "20"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["data"]["all_passed"], serde_json::Value::Bool(true));
    assert_eq!(doc["data"]["checks"].as_array().unwrap().len(), 5);
}

#[test]
fn verify_with_unreachable_tolerance_exits_one() {
    let dir = fixture_dir();
    let edges = dir.join("fib2.edges");
    std::fs::write(&edges, "a a\na b\nb a\n").unwrap();
    let out = run(&[
        "verify",
        "--graph",
        edges.to_str().unwrap(),
        "--vertex",
        "a",
        "--nmax",
        "8",
        "--tol",
        "1e-12",
    ]);
    assert_eq!(out.status.code(), Some(1));
    // the report is still written, with the failing checks marked
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["data"]["all_passed"], serde_json::Value::Bool(false));
}

#[test]
fn af_checks_pass_on_finite_graphs() {
    let dir = fixture_dir();
    let edges = dir.join("fib3.edges");
    std::fs::write(&edges, "a a\na b\nb a\n").unwrap();
    let out = run(&[
        "af", "--graph", edges.to_str().unwrap(), "--vertex", "a", "--n", "2",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["data"]["homomorphism"]["omega_size"], serde_json::json!(14));
    assert_eq!(doc["data"]["independence"]["rank"], serde_json::json!(14));
}

#[test]
fn subgraphs_reports_a_monotone_sequence() {
    let out = run(&[
        "subgraphs", "--family", "salama_2_8", "--vertex", "0", "--radii", "5,9,13",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["data"]["monotone"], serde_json::Value::Bool(true));
    let entries = doc["data"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 3);
    let last = entries[2]["value_nats"].as_f64().unwrap();
    assert!((last - 2f64.ln()).abs() < 0.1);
}

#[test]
fn entropy_command_reports_the_star_limit() {
    let out = run(&[
        "entropy", "--family", "salama_2_8", "--vertex", "0", "--quantity", "range-star",
        "--nmax", "100", "--stride", "4",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let v = doc["data"]["value_nats"].as_f64().unwrap();
    assert!((v - 8f64.ln() / 4.0).abs() < 0.02);
    assert_eq!(doc["data"]["method"], "stride_subsequence");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = [
        "sandwich", "--family", "salama_pp", "--p", "3", "--vertex", "0", "--nmax", "60",
        "--tol", "0.05",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn usage_errors_exit_two() {
    // unknown class
    let dir = fixture_dir();
    let edges = dir.join("fib4.edges");
    std::fs::write(&edges, "a a\na b\nb a\n").unwrap();
    let out = run(&[
        "counts", "--graph", edges.to_str().unwrap(), "--vertex", "a", "--class", "bogus",
        "--nmax", "5",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // missing source
    let out = run(&["counts", "--vertex", "a", "--class", "source", "--nmax", "5"]);
    assert_eq!(out.status.code(), Some(2));

    // unknown vertex
    let out = run(&[
        "counts", "--graph", edges.to_str().unwrap(), "--vertex", "zz", "--class", "source",
        "--nmax", "5",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // bad flags are rejected by the parser
    let out = run(&["counts", "--nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn degree_cap_override_rejects_wide_vertices() {
    let out = bin()
        .env("GRAPHENT_MAX_DEGREE", "3")
        .args(["counts", "--family", "salama_2_8", "--vertex", "0", "--class", "loop", "--nmax", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("exceeding the hard cap"), "stderr: {err}");
}

#[test]
fn family_spec_file_is_accepted() {
    let dir = fixture_dir();
    let spec = dir.join("pp3.json");
    std::fs::write(&spec, r#"{"family":"salama_pp","p":3,"label":"cubed"}"#).unwrap();
    let out = run(&[
        "sandwich", "--family-spec", spec.to_str().unwrap(), "--vertex", "0", "--nmax", "60",
        "--tol", "0.05",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(doc["source"].as_str().unwrap().contains("cubed"));
    let lower = doc["data"]["lower_nats"].as_f64().unwrap();
    assert!((lower - 3f64.ln()).abs() < 0.05);
}
