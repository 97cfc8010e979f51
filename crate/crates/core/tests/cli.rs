use std::process::{Command, Output};

use kummer_towers::cli::{ClassifyOutput, CountOutput};
use kummer_towers::kummer_basic::RamificationReport;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kummer-towers"))
        .args(args)
        .env_remove("KUMMER_TOWERS_FIELD")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn classify_examples() {
    let out = run(&["classify", "--field", "2^2", "--b", "1,0", "--c", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("type1 (alpha = t, beta = t + 1)"), "{text}");
    assert!(text.contains("good candidate (necessary condition only)"));

    let out = run(&["classify", "--field", "7", "--b", "0", "--c", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "irreducible_infinite_genus; criterion: d=2, witness x^2 + 1, N = {3}");

    let out = run(&["classify", "--field", "7", "--b", "7", "--c", "-6"]);
    assert!(stdout(&out).contains("d=2"));
}

#[test]
fn invalid_tower_exits_two() {
    let out = run(&["classify", "--field", "5", "--b", "1", "--c", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["analyze", "--field", "7", "--b", "0", "--c", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_arguments_exit_one() {
    for args in [
        &["classify", "--field", "7", "--b", "1"][..],
        &["classify", "--field", "6", "--b", "1", "--c", "1"],
        &["classify", "--b", "1", "--c", "1"],
        &["classify", "--field", "2^2", "--b", "1,0,1", "--c", "1"],
        &["verify-mawu", "--limit", "3"],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn budget_and_io_exit_codes() {
    let out = run(&["count", "--field", "7", "--b", "0", "--c", "1", "--levels", "12", "--chain-budget", "1000"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["census", "--field", "7", "--out", "/nonexistent/dir/census.csv"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn analyze_reports_genus_one() {
    let out = run(&["analyze", "--field", "7", "--b", "0", "--c", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("genus 1"));
    assert!(text.contains("N = {3}"));
}

#[test]
fn json_round_trips() {
    let out = run(&["analyze", "--field", "7", "--b", "0", "--c", "1", "--format", "json"]);
    let report: RamificationReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!((report.q, report.genus), (7, 1));
    assert_eq!(serde_json::to_string_pretty(&report).unwrap().trim(), stdout(&out).trim());

    let out = run(&["classify", "--field", "2^2", "--b", "1,0", "--c", "1", "--format", "json"]);
    let parsed: ClassifyOutput = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(parsed.classification.class, "type1");
    assert_eq!(serde_json::to_string_pretty(&parsed).unwrap().trim(), stdout(&out).trim());

    let out = run(&["count", "--field", "2^2", "--b", "1", "--c", "1", "--format", "json"]);
    let parsed: CountOutput = serde_json::from_slice(&out.stdout).unwrap();
    let chains: Vec<u64> = parsed.levels.iter().map(|l| l.chain_count).collect();
    assert_eq!(chains, [4, 6, 8, 10, 12]);
}

#[test]
fn census_csv_over_f7() {
    let dir = std::env::temp_dir().join(format!("kummer-towers-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("f7.csv");
    let out = run(&["census", "--field", "7", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let body = std::fs::read_to_string(&path).unwrap();
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    assert_eq!(reader.headers().unwrap().get(0), Some("q"));
    assert_eq!(reader.records().count(), 48);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_mawu_is_clean() {
    let out = run(&["verify-mawu"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0 violations"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["census", "--field", "2^2", "--levels", "2", "--format", "json"][..],
        &["analyze", "--field", "13", "--b", "1", "--c", "2"],
        &["census", "--field", "7", "--seed", "9"],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}

#[test]
fn field_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_kummer-towers"))
        .args(["classify", "--b", "0", "--c", "1"])
        .env("KUMMER_TOWERS_FIELD", "7")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("d=2"));
}
