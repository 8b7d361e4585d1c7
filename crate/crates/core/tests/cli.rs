use std::process::{Command, Output};

use pathcat::models::{save_model, to_document, GpdModel};
use pathcat::report::Report;

fn pathcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pathcat")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(code(&pathcat(&["--help"])), 0);
    assert_eq!(code(&pathcat(&["frobnicate"])), 2);
    assert_eq!(code(&pathcat(&["laws", "--law", "nonsense", "--gpd-seeds", "bz2"])), 2);
    // a model must be named
    assert_eq!(code(&pathcat(&["validate"])), 2);
    assert_eq!(code(&pathcat(&["validate", "--gpd-seeds", "no-such-seed"])), 2);
}

#[test]
fn a_single_law_passes() {
    let out = pathcat(&["laws", "--gpd-seeds", "bz2", "--law", "interchange"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8(out.stdout).unwrap().contains("interchange"));
}

#[test]
fn json_reports_parse_and_match_the_exit_code() {
    let out = pathcat(&["enrich", "--discrete", "1,2", "--format", "json"]);
    let report: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.failure_count(), 0);
    assert_eq!(code(&out), 0);
}

#[test]
fn corrupted_documents_fail_validation() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc = to_document(&GpdModel::discrete(&[1], 200_000)).unwrap();
    let good = dir.path().join("good.json");
    save_model(&good, &doc).unwrap();
    assert_eq!(code(&pathcat(&["validate", good.to_str().unwrap()])), 0);

    doc.weak_equivalences.clear();
    let bad = dir.path().join("corrupted.json");
    save_model(&bad, &doc).unwrap();
    let out = pathcat(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8(out.stdout).unwrap().contains("FAIL"));

    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{\"objects\": [0], \"extra\": 1}").unwrap();
    assert_eq!(code(&pathcat(&["validate", garbage.to_str().unwrap()])), 2);
}

#[test]
fn out_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = pathcat(&["validate", "--gpd-seeds", "interval", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let report: Report = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report.failure_count(), 0);
}

#[test]
fn resource_cap_has_its_own_exit_code() {
    let out = pathcat(&["check-exp", "--gpd-seeds", "indiscrete3", "--cap", "1000"]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn candidate_documents_are_tagged_by_kind() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("point.json");
    std::fs::write(&good, r#"{"kind": "exponential", "x": 0, "y": 0, "e": 0, "eval": 0}"#).unwrap();
    let out = pathcat(&["check-exp", "--gpd-seeds", "terminal", "--candidate", good.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8(out.stdout).unwrap().contains("is strong"));

    let untagged = dir.path().join("untagged.json");
    std::fs::write(&untagged, r#"{"x": 0, "y": 0, "e": 0, "eval": 0}"#).unwrap();
    assert_eq!(code(&pathcat(&["check-exp", "--gpd-seeds", "terminal", "--candidate", untagged.to_str().unwrap()])), 2);
}
