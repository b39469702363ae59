//! End-to-end tests of the `cdgor` binary: exit codes, report content,
//! canonical file output, and budget handling.

use std::path::Path;
use std::process::{Command, Output};

fn cdgor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdgor"))
        .args(args)
        .env_remove("CDGOR_BUDGET")
        .output()
        .expect("binary runs")
}

fn cdgor_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdgor"))
        .args(args)
        .env_remove("CDGOR_BUDGET")
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn feasible_join_target_reports_case_and_witness() {
    let out = cdgor(&["feasible", "--rank5-cd", "1,0,1,1"]);
    let text = stdout(&out);
    assert_eq!(code(&out), 0, "{text}");
    assert!(text.contains("CaseI"), "{text}");
    assert!(text.contains("join C_3 * C_3"), "{text}");
}

#[test]
fn feasible_middle_case_reports_split_witness() {
    let out = cdgor(&["feasible", "--rank5-cd", "1,1,1,1"]);
    let text = stdout(&out);
    assert_eq!(code(&out), 0, "{text}");
    assert!(text.contains("CaseII"), "{text}");
    assert!(text.contains("b = ("), "{text}");
}

#[test]
fn infeasible_targets_exit_one() {
    let out = cdgor(&["feasible", "--rank6-d", "3,3"]);
    let text = stdout(&out);
    assert_eq!(code(&out), 1, "{text}");
    assert!(text.contains("infeasible"), "{text}");

    let out = cdgor(&["feasible", "--rank5-cd", "2,1,2,1"]);
    assert_eq!(code(&out), 1);

    // a2 = 1 with a13 past a1*a3: the reason must name the excess, not the split.
    let out = cdgor(&["feasible", "--rank5-cd", "2,1,2,5"]);
    let text = stdout(&out);
    assert_eq!(code(&out), 1, "{text}");
    assert!(text.contains("a13 = 5 exceeds a1*a3 = 4"), "{text}");

    let out = cdgor(&["realize-cd", "--alpha", "-1,0,0,0"]);
    let text = stdout(&out);
    assert_eq!(code(&out), 1, "{text}");
    assert!(text.contains("nonnegative"), "{text}");
}

#[test]
fn realize_cd_verify_certifies_the_emitted_poset() {
    let out = cdgor(&["realize-cd", "--alpha", "0,1,0,0", "--verify"]);
    let text = stdout(&out);
    assert_eq!(code(&out), 0, "{text}");
    assert!(text.contains("c^4 + 1*cdc"), "{text}");
    assert!(text.contains("invariant matches target"), "{text}");
    assert!(text.contains("homology certified"), "{text}");
}

#[test]
fn realize_d_output_files_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().expect("tempdir");
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let run = |path: &Path| {
        let out = cdgor(&["realize-d", "--rank", "5", "--d", "1,4,4", "--out", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{}", stdout(&out));
    };
    run(&a);
    run(&b);
    let bytes_a = std::fs::read(&a).expect("file written");
    let bytes_b = std::fs::read(&b).expect("file written");
    assert!(!bytes_a.is_empty());
    assert_eq!(bytes_a, bytes_b);
    assert_eq!(bytes_a.last(), Some(&b'\n'));
}

#[test]
fn rank6_realization_verifies_from_file() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("p6.json");
    let out = cdgor(&[
        "realize-d", "--rank", "6", "--d", "1,5,6", "--out", path.to_str().unwrap(), "--verify",
    ]);
    let text = stdout(&out);
    assert_eq!(code(&out), 0, "{text}");
    assert!(text.contains("d-vector: (1, 5, 6)"), "{text}");
    assert!(text.contains("homology certified"), "{text}");
}

#[test]
fn flag_sphere_verify_reports_flag_and_gamma() {
    let out = cdgor(&["flag-sphere", "--gamma", "1,2,1", "--verify"]);
    let text = stdout(&out);
    assert_eq!(code(&out), 0, "{text}");
    assert!(text.contains("flag: yes"), "{text}");
    assert!(text.contains("γ-vector: (1, 2, 1)"), "{text}");
    assert!(text.contains("homology certified"), "{text}");
}

#[test]
fn invariants_reads_both_file_kinds() {
    let dir = tempfile::tempdir().expect("tempdir");
    let poset = dir.path().join("p.json");
    let complex = dir.path().join("k.json");
    cdgor(&["realize-d", "--rank", "5", "--d", "1,4,4", "--out", poset.to_str().unwrap()]);
    cdgor(&["flag-sphere", "--gamma", "1,4,4", "--out", complex.to_str().unwrap()]);

    let out = cdgor(&["invariants", poset.to_str().unwrap()]);
    let text = stdout(&out);
    assert_eq!(code(&out), 0, "{text}");
    assert!(text.contains("kind: graded poset"), "{text}");
    assert!(text.contains("cd-index: c^4 + 2*c^2d + 2*dc^2 + 4*d^2"), "{text}");
    assert!(text.contains("d-vector: (1, 4, 4)"), "{text}");

    let out = cdgor(&["invariants", complex.to_str().unwrap()]);
    let text = stdout(&out);
    assert_eq!(code(&out), 0, "{text}");
    assert!(text.contains("kind: simplicial complex"), "{text}");
    assert!(text.contains("γ-vector: (1, 4, 4)"), "{text}");
}

#[test]
fn verify_fails_on_a_poset_without_cd_index() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("chain.json");
    std::fs::write(
        &path,
        r#"{"elements":[{"id":0,"rank":0},{"id":1,"rank":1},{"id":2,"rank":2},{"id":3,"rank":3}],
           "covers":[[0,1],[1,2],[2,3]],"bottom":0,"top":3}"#,
    )
    .expect("write chain");
    let out = cdgor(&["verify", path.to_str().unwrap()]);
    let text = stdout(&out);
    assert_eq!(code(&out), 1, "{text}");
    assert!(text.contains("thin: no"), "{text}");
    assert!(text.contains("cd-expressible: no"), "{text}");
}

#[test]
fn verify_homology_reports_betti_profile() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("p.json");
    cdgor(&["realize-d", "--rank", "5", "--d", "1,2,1", "--out", path.to_str().unwrap()]);
    let out = cdgor(&["verify", path.to_str().unwrap(), "--homology"]);
    let text = stdout(&out);
    assert_eq!(code(&out), 0, "{text}");
    assert!(text.contains("H~3: Z^1"), "{text}");
    assert!(text.contains("homology-sphere (dim 3): yes"), "{text}");
}

#[test]
fn grid_marks_over_budget_entries_skipped() {
    let out = cdgor(&["grid", "--suite", "rank5-d", "--max", "2", "--homology", "--budget", "10"]);
    let text = stdout(&out);
    assert_eq!(code(&out), 0, "{text}");
    assert!(text.contains("skipped"), "{text}");
    assert!(text.contains("0 certified"), "{text}");
    assert!(text.contains("0 failures"), "{text}");
}

#[test]
fn budget_flag_overrides_environment() {
    let args = ["grid", "--suite", "rank5-d", "--max", "2", "--homology", "--budget", "100000"];
    let out = cdgor_env(&args, "CDGOR_BUDGET", "10");
    let text = stdout(&out);
    assert_eq!(code(&out), 0, "{text}");
    assert!(text.contains("0 skipped"), "{text}");

    let out = cdgor_env(&["grid", "--suite", "rank5-d", "--max", "2", "--homology"], "CDGOR_BUDGET", "10");
    let text = stdout(&out);
    assert!(text.contains("0 certified"), "{text}");
}

#[test]
fn grid_json_summary_has_no_failures() {
    let out = cdgor(&["grid", "--suite", "rank5-cd", "--max", "1", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json report");
    assert_eq!(v["summary"]["failures"], 0);
    assert!(v["rows"].as_array().expect("rows").len() > 10);
}

#[test]
fn compare_tabulates_agreement() {
    for k in ["3", "4"] {
        let out = cdgor(&["compare", "--k", k, "--max", "4"]);
        let text = stdout(&out);
        assert_eq!(code(&out), 0, "{text}");
        assert!(text.contains("0 disagreements"), "{text}");
    }
}

#[test]
fn usage_errors_exit_two() {
    let out = cdgor(&["feasible", "--rank5-cd", "1,2"]);
    assert_eq!(code(&out), 2);

    let out = cdgor(&["realize-d", "--rank", "7", "--d", "1,1,1"]);
    assert_eq!(code(&out), 2);

    let out = cdgor(&["realize-d", "--rank", "5", "--d", "2,1,1"]);
    assert_eq!(code(&out), 2);

    let out = cdgor(&["invariants", "/nonexistent/file.json"]);
    assert_eq!(code(&out), 2);
}
