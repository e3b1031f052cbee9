//! End-to-end tests of the `mscount` binary: report formats, exit codes,
//! and the wiring between subcommands.

use std::path::Path;
use std::process::{Command, Output};

fn mscount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mscount"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn write_cnf(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn count_pruned_reports_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_cnf(dir.path(), "f.cnf", "p cnf 2 1\n1 2 0\n");
    let output = mscount(&["count", "--in", &path, "--mode", "pruned"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("modelCount: 3"), "{text}");
    assert!(text.contains("exact: true"), "{text}");
}

#[test]
fn count_json_schema_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_cnf(dir.path(), "f.cnf", "p cnf 2 1\n1 2 0\n");
    let output = mscount(&[
        "count",
        "--in",
        &path,
        "--mode",
        "exhaustive",
        "--format",
        "json",
    ]);
    assert!(output.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(json["modelCount"], "3");
    assert_eq!(json["mode"], "exhaustive");
    assert_eq!(json["exact"], true);
    assert!(json["nodesVisited"].is_u64());
    assert!(json["subtreesPruned"].is_u64());
}

#[test]
fn count_a2_reports_inexact_banner_and_matches_oracle_here() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_cnf(dir.path(), "f.cnf", "p cnf 8 1\n1 2 0\n");
    let output = mscount(&[
        "count", "--in", &path, "--mode", "a2", "--sigma", "1", "--seed", "0",
    ]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("modelCount: 192"), "{text}");
    assert!(text.contains("exact: false"), "{text}");
}

#[test]
fn count_oracle_over_ceiling_exits_one_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_cnf(dir.path(), "big.cnf", "p cnf 40 1\n1 0\n");
    let output = mscount(&["count", "--in", &path, "--mode", "oracle"]);
    assert_eq!(output.status.code(), Some(1));
    let err = String::from_utf8(output.stderr).unwrap();
    assert!(err.contains("at most 30 variables"), "{err}");
}

#[test]
fn count_parse_error_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_cnf(dir.path(), "bad.cnf", "p cnf 3 1\n0\n");
    let output = mscount(&["count", "--in", &path, "--mode", "pruned"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn bad_flags_exit_one_and_help_exits_zero() {
    let output = mscount(&["count", "--no-such-flag"]);
    assert_eq!(output.status.code(), Some(1));
    let help = mscount(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("count"));
}

#[test]
fn generate_respects_candidate_bound() {
    // 2^2 * C(2,2) = 4 candidates; asking for 5 must fail.
    let output = mscount(&[
        "generate", "--n", "2", "--m", "5", "--k", "2", "--seed", "1",
    ]);
    assert_eq!(output.status.code(), Some(1));
    let ok = mscount(&[
        "generate", "--n", "2", "--m", "4", "--k", "2", "--seed", "1",
    ]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).starts_with("p cnf 2 4\n"));
}

#[test]
fn inflate_then_validate_counts_agree() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.cnf").to_str().unwrap().to_string();
    let inflated = dir.path().join("fi.cnf").to_str().unwrap().to_string();
    let record = dir.path().join("rec.json").to_str().unwrap().to_string();

    let gen = mscount(&[
        "generate", "--n", "9", "--m", "10", "--k", "3", "--seed", "6", "--out", &f,
    ]);
    assert!(gen.status.success());
    let inf = mscount(&[
        "inflate", "--in", &f, "--sigma", "1", "--seed", "2", "--out", &inflated, "--record",
        &record,
    ]);
    assert!(inf.status.success());

    let record_json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&record).unwrap()).unwrap();
    assert!(record_json["z"].is_u64());
    assert!(record_json["entries"].is_array());

    let val = mscount(&["validate", "--in", &f, "--against", &inflated]);
    assert_eq!(val.status.code(), Some(0), "{}", stdout(&val));
    assert!(stdout(&val).contains("counts agree"));
}

#[test]
fn validate_corpus_agrees_and_exits_zero() {
    let output = mscount(&[
        "validate", "--n", "10", "--m", "16", "--k", "3", "--seeds", "20",
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stdout(&output));
    let text = stdout(&output);
    assert!(text.contains("20/20 agree"), "{text}");
    assert_eq!(text.lines().count(), 21);
}

#[test]
fn validate_without_arguments_exits_one() {
    let output = mscount(&["validate"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn validate_against_mismatched_counts_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_cnf(dir.path(), "a.cnf", "p cnf 2 1\n1 2 0\n"); // 3 models
    let b = write_cnf(dir.path(), "b.cnf", "p cnf 2 1\n1 0\n"); // 2 models
    let output = mscount(&["validate", "--in", &a, "--against", &b]);
    assert_eq!(output.status.code(), Some(3));
    assert!(stdout(&output).contains("counts DIFFER"));
}

#[test]
fn bench_writes_csv_with_header() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sweep.json");
    std::fs::write(
        &config,
        r#"{"ns":[8],"ks":[3],"deltas":[1.0],"sigmas":[1],"seeds":[3],"trials":200}"#,
    )
    .unwrap();
    let output = mscount(&["bench", "--config", config.to_str().unwrap()]);
    assert!(output.status.success());
    let text = stdout(&output);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("n,m,k,delta,sigma,seed,"));
    assert_eq!(lines.count(), 1);
}

#[test]
fn bench_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sweep.json");
    std::fs::write(&config, r#"{"ns":[8]}"#).unwrap();
    let output = mscount(&["bench", "--config", config.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
}
