//! End-to-end tests of the `conj-forge` binary: output formats, exit
//! codes, and report determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_conj-forge"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not json ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("conj-forge-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn eval_len_examples() {
    let out = run(&[
        "eval", "len", "--group", "ll", "--q", "2", "--n", "0", "--f", "1@0,1@2",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["length"], 6);

    let out = run(&[
        "eval", "len", "--group", "ll", "--q", "2", "--n", "0", "--f", "",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["length"], 0);
}

#[test]
fn eval_mul_bs_example() {
    let out = run(&[
        "eval", "mul", "--group", "bs", "--q", "2", "--lhs", "1;0", "--rhs", "0;1",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["n"], 1);
    assert_eq!(v["f"], "2");
}

#[test]
fn eval_inv_round_trips() {
    let out = run(&[
        "eval",
        "inv",
        "--group",
        "ll",
        "--q",
        "2",
        "--elem",
        "2;1@0,1@3",
    ]);
    let v = stdout_json(&out);
    let elem = format!("{};{}", v["n"], v["f"].as_str().unwrap());
    let back = run(&["eval", "inv", "--group", "ll", "--q", "2", "--elem", &elem]);
    let w = stdout_json(&back);
    assert_eq!(w["n"], 2);
    assert_eq!(w["f"], "1@0,1@3");
}

#[test]
fn eval_dl_dist() {
    let out = run(&[
        "eval",
        "dl-dist",
        "--q",
        "2",
        "--lhs",
        "0;",
        "--rhs",
        "0;1@0,1@2",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["distance"], 6);
}

#[test]
fn eval_oracle_len_matches_formula() {
    let out = run(&[
        "eval",
        "oracle-len",
        "--group",
        "ll",
        "--q",
        "2",
        "--elem",
        "0;1@0,1@2",
        "--radius",
        "8",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["length"], 6);
}

#[test]
fn conj_lamplighter_example() {
    let out = run(&[
        "conj", "--group", "ll", "--q", "2", "--lhs", "1;1@0", "--rhs", "1;1@1", "--oracle",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["conjugate"], true);
    assert_eq!(v["witness"]["n"], 0);
    assert_eq!(v["witness"]["f"], "1@0");
    assert_eq!(v["within_bound"], true);
    assert_eq!(v["oracle"]["agrees"], true);
}

#[test]
fn conj_bs_negative_example() {
    let out = run(&[
        "conj", "--group", "bs", "--q", "2", "--lhs", "2;0", "--rhs", "2;1",
    ]);
    assert!(out.status.success(), "negative verdicts still exit 0");
    let v = stdout_json(&out);
    assert_eq!(v["conjugate"], false);
    assert!(v["witness"].is_null());
}

#[test]
fn conj_identical_inputs() {
    let out = run(&[
        "conj", "--group", "bs", "--q", "3", "--lhs", "2;4", "--rhs", "2;4",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["conjugate"], true);
    assert_eq!(v["witness"]["n"], 0);
    assert_eq!(v["witness"]["f"], "0");
}

#[test]
fn parse_errors_exit_2() {
    let out = run(&[
        "eval", "len", "--group", "ll", "--q", "2", "--n", "0", "--f", "1#0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("coeff@exp"),
        "diagnostic names the grammar: {err}"
    );

    let out = run(&[
        "conj", "--group", "bs", "--q", "2", "--lhs", "nonsense", "--rhs", "0;1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_3() {
    let out = run(&[
        "eval", "len", "--group", "bs", "--q", "2", "--n", "1", "--f", "0",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn audit_lamplighter_asserted_bound() {
    let path = tmp_path("ll-audit.json");
    let out = run(&[
        "audit",
        "--group",
        "ll",
        "--q",
        "2",
        "--samples",
        "1000",
        "--seed",
        "42",
        "--max-len",
        "12",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["violations"], 0);
    assert!(report["aggregate"]["max_ratio"].as_f64().unwrap() <= 3.0);
    assert_eq!(report["per_sample"].as_array().unwrap().len(), 1000);
    std::fs::remove_file(&path).ok();
}

#[test]
fn audit_empty_run() {
    let path = tmp_path("empty-audit.json");
    let out = run(&[
        "audit",
        "--group",
        "bs",
        "--q",
        "2",
        "--samples",
        "0",
        "--seed",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["per_sample"].as_array().unwrap().len(), 0);
    std::fs::remove_file(&path).ok();
}

#[test]
fn audit_reports_are_byte_identical() {
    let a = tmp_path("det-a.json");
    let b = tmp_path("det-b.json");
    let base = [
        "audit",
        "--group",
        "bs",
        "--q",
        "2",
        "--samples",
        "200",
        "--seed",
        "7",
        "--max-len",
        "6",
    ];
    let mut run_a: Vec<&str> = base.to_vec();
    run_a.extend(["--out", a.to_str().unwrap(), "--threads", "1"]);
    let mut run_b: Vec<&str> = base.to_vec();
    run_b.extend(["--out", b.to_str().unwrap(), "--threads", "3"]);
    assert!(run(&run_a).status.success());
    assert!(run(&run_b).status.success());
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b, "reports differ across thread counts");
    std::fs::remove_file(&a).ok();
    std::fs::remove_file(&b).ok();
}

#[test]
fn audit_unwritable_path_exits_4() {
    let out = run(&[
        "audit",
        "--group",
        "ll",
        "--q",
        "2",
        "--samples",
        "1",
        "--seed",
        "1",
        "--out",
        "/nonexistent-dir/report.json",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn polycyclic_spec_file_workflow() {
    let spec_path = tmp_path("sol.json");
    std::fs::write(&spec_path, r#"{"n":2,"k":1,"generators":[[[2,1],[1,1]]]}"#).unwrap();
    let spec = spec_path.to_str().unwrap();

    // Conjugacy with a known witness.
    let out = run(&[
        "conj",
        "--group",
        "pc",
        "--spec",
        spec,
        "--lhs",
        r#"{"a":[0,0],"b":[1]}"#,
        "--rhs",
        r#"{"a":[1,0],"b":[1]}"#,
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["conjugate"], true);
    assert_eq!(v["witness"]["b"][0], 0);

    // Audit over the spec.
    let report_path = tmp_path("pc-audit.json");
    let out = run(&[
        "audit",
        "--group",
        "pc",
        "--spec",
        spec,
        "--samples",
        "100",
        "--seed",
        "7",
        "--max-len",
        "5",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["violations"], 0);
    assert_eq!(report["aggregate"]["verified"], 100);

    // Broken spec exits 3.
    let bad = tmp_path("bad.json");
    std::fs::write(&bad, r#"{"n":2,"k":1,"generators":[[[1,1],[0,1]]]}"#).unwrap();
    let out = run(&[
        "conj",
        "--group",
        "pc",
        "--spec",
        bad.to_str().unwrap(),
        "--lhs",
        r#"{"a":[0,0],"b":[1]}"#,
        "--rhs",
        r#"{"a":[1,0],"b":[1]}"#,
    ]);
    assert_eq!(out.status.code(), Some(3));

    std::fs::remove_file(&spec_path).ok();
    std::fs::remove_file(&report_path).ok();
    std::fs::remove_file(&bad).ok();
}

#[test]
fn printed_elements_reparse_to_equal_elements() {
    // Round-trip through the CLI surface on a sweep of elements.
    for (n, f) in [(0, ""), (1, "1@0"), (-3, "1@-2,1@5"), (7, "1@1")] {
        let elem = format!("{n};{f}");
        let out = run(&["eval", "inv", "--group", "ll", "--q", "2", "--elem", &elem]);
        let v = stdout_json(&out);
        let inv = format!("{};{}", v["n"], v["f"].as_str().unwrap());
        let back = run(&["eval", "inv", "--group", "ll", "--q", "2", "--elem", &inv]);
        let w = stdout_json(&back);
        assert_eq!(w["n"].as_i64().unwrap(), n);
        assert_eq!(w["f"].as_str().unwrap(), f);
    }
}
