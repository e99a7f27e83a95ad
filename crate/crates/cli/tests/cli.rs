//! Command-line behavior: exit codes, golden outputs, and report shape.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn systems_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../systems")
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name),
    )
    .unwrap()
}

fn mcs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn system(name: &str) -> String {
    systems_dir().join(name).to_str().unwrap().to_string()
}

#[test]
fn simulate_empty_word_prints_the_initial_distribution() {
    let out = mcs(&["simulate", &system("three-state.json"), "--word", ""]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("word: ε"));
    assert!(stdout.contains("s0: 1"));
    assert!(stdout.contains("s1: 0"));
    assert!(stdout.contains("verdict: accept"));
}

#[test]
fn oracle_dump_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("dump.txt");
    let out = mcs(&[
        "oracle",
        &system("ends-in-a.json"),
        "--maxlen",
        "3",
        "--dump",
        dump.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(
        std::fs::read_to_string(&dump).unwrap(),
        golden("ends-in-a-oracle-len3.txt")
    );
}

#[test]
fn extracted_dfa_text_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let dfa = dir.path().join("dfa.txt");
    let out = mcs(&[
        "extract",
        "dfa",
        &system("ends-in-a.json"),
        "--oracle-horizon",
        "12",
        "--out",
        dfa.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("0 mismatches over 8191 words"));
    assert!(stdout.contains("states: 2"));
    assert_eq!(std::fs::read_to_string(&dfa).unwrap(), golden("ends-in-a-dfa.txt"));
}

#[test]
fn dobrushin_report_carries_the_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = mcs(&[
        "dobrushin",
        &system("three-state.json"),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(value["schema"], "report-v1");
    assert_eq!(value["command"], "dobrushin");
    assert_eq!(value["results"]["per_letter"]["a"]["delta"], 0.5);
    assert_eq!(value["results"]["per_letter"]["a"]["c_star"], 0.0);
}

#[test]
fn invalid_input_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = mcs(&["simulate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));

    // Structurally fine JSON with a non-stochastic row is invalid too.
    std::fs::write(
        &bad,
        r#"{
            "schema": "mcs-v1", "alphabet": ["a"],
            "kernels": { "a": [[0.5, 0.4], [0.5, 0.5]] },
            "initial": [1, 0],
            "recognizer": { "accepting": [0], "cut": 0.5, "isolation": 0.1 }
        }"#,
    )
    .unwrap();
    let out = mcs(&["simulate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));

    let out = mcs(&["oracle", &system("ends-in-a.json"), "--maxlen", "50"]);
    assert_eq!(out.status.code(), Some(4), "budget blowups are invalid input");
}

#[test]
fn undecided_words_exit_3() {
    // The three-state margins shrink geometrically and cross the isolation
    // band from the fourth power on.
    let out = mcs(&["oracle", &system("three-state.json"), "--maxlen", "12"]);
    assert_eq!(out.status.code(), Some(3));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("undecided"));
}

#[test]
fn failed_certification_exits_2() {
    // Identity letters keep δ = 1 at every level.
    let out = mcs(&["certify", "ergodic", &system("even-parity.json"), "--rmax", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("not certified"));

    let out = mcs(&["extract", "definite", &system("even-parity.json"), "--rmax", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn certifications_succeed_on_the_seed_system() {
    let seed = system("weakly-ergodic-seed.json");
    for args in [
        vec!["certify", "ergodic", &seed, "--rmax", "2"],
        vec!["certify", "doeblin", &seed],
        vec!["certify", "quasicompact", &seed, "--n", "1"],
        vec!["extract", "definite", &seed, "--rmax", "2"],
    ] {
        let out = mcs(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
    }
}

#[test]
fn gaussian_system_is_quasi_compact_at_block_one() {
    let out = mcs(&["certify", "quasicompact", &system("gauss-two-map.json"), "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("quasi-compact"));
}

#[test]
fn gauss_identity_recognizes_everything() {
    // The uniform distribution is invariant for the reflected identity
    // map, so every word lands on the same accepting margin.
    let out = mcs(&[
        "extract",
        "dfa",
        &system("gauss-identity.json"),
        "--oracle-horizon",
        "8",
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("states: 1"));
    assert!(stdout.contains("0 mismatches"));
}

#[test]
fn gaussian_file_loads_and_reports_density_bound() {
    let out = mcs(&["dobrushin", &system("gauss-two-map.json")]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("k_hat"));
}
