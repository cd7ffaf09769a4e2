use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn nielsen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nielsen"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scenario(body: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(body.as_bytes()).unwrap();
    f
}

fn obstruct(body: &str, extra: &[&str]) -> Output {
    let f = scenario(body);
    let mut args = vec!["obstruct", f.path().to_str().unwrap()];
    args.extend_from_slice(extra);
    nielsen(&args)
}

const HITCHIN: &str = r#"{"build": "Hitchin", "mapping_class": {"type": "projective_twist",
  "config": {"components": [{"kind": "projective_plane", "euler": -1, "count": 1, "essential": true}]}}}"#;

const Z11: &str = r#"{"build": "csum(Hitchin, CP2bar)", "mapping_class":
  {"type": "multi_reflection", "k": 1, "xprime": "Hitchin"}}"#;

#[test]
fn lattice_info() {
    let o = nielsen(&["lattice", "info", "2*E8 + 3*U"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("rank 22, b+ 3, b- 19"));
    let o = nielsen(&["lattice", "info", "E8 + U", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["invariants"]["rank"], 10);
    assert_eq!(v["invariants"]["b_plus"], 1);
}

#[test]
fn classify() {
    let o = nielsen(&[
        "classify", "--rank", "22", "--sig", "-16", "--parity", "even",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "2*E8 + 3*U");
    let o = nielsen(&["classify", "--rank", "3", "--sig", "-1", "--parity", "even"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn action() {
    let o = nielsen(&[
        "action",
        "--lattice",
        "U + <-1>",
        "--reflect",
        "0,0,1",
        "--json",
    ]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["fixed_rank"], 2);
    assert_eq!(v["fixed_signatures"]["sigma_f"], 0);
    let o = nielsen(&["action", "--lattice", "U", "--twist", "1,-1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("involution: true"));
    let o = nielsen(&["action", "--lattice", "U", "--twist", "1,x"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hitchin_scenario() {
    let o = obstruct(HITCHIN, &["--json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdicts"][0]["conclusion"], "obstructed_no_finite_order");
    assert_eq!(v["verdicts"][1]["conclusion"], "nontrivial_class");
    let text = stdout(&obstruct(HITCHIN, &[]));
    assert!(text.contains("Obstructed (no finite order)"));
}

#[test]
fn enriques_boundary() {
    let o = obstruct(
        r#"{"build": "Enriques", "mapping_class": {"type": "multi_twist",
          "config": {"components": [{"kind": "sphere", "euler": -2, "count": 4}]}},
          "options": {"format": "json"}}"#,
        &[],
    );
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdicts"][0]["conclusion"], "inapplicable");
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(obstruct("this is not json", &[]).status.code(), Some(2));
    assert_eq!(
        nielsen(&["obstruct", "/nonexistent/scenario.json"])
            .status
            .code(),
        Some(2)
    );
    let o = obstruct(
        r#"{"build": "Enriques", "mapping_class": {"type": "multi_twist",
          "config": {"components": [{"kind": "sphere", "euler": -2, "count": 9}]}}}"#,
        &[],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("room for 8"));
    let o = obstruct(&HITCHIN.replace("Hitchin", "Hitchin#2"), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(nielsen(&["lattice", "info", "E9"]).status.code(), Some(2));
}

#[test]
fn as_paper_override() {
    let literal: Value = serde_json::from_str(&stdout(&obstruct(Z11, &["--json"]))).unwrap();
    assert_eq!(literal["verdicts"][0]["conclusion"], "hypothesis_failure");
    assert!(literal["verdicts"][0].get("discrepancy").is_none());
    let paper: Value =
        serde_json::from_str(&stdout(&obstruct(Z11, &["--json", "--as-paper"]))).unwrap();
    assert_eq!(
        paper["verdicts"][0]["conclusion"],
        "obstructed_no_involution"
    );
    assert!(paper["verdicts"][0]["discrepancy"]
        .as_str()
        .unwrap()
        .contains("spin"));
}

#[test]
fn degtyarev() {
    let o = nielsen(&["degtyarev"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("9/9 identities hold"));
    let v: Value = serde_json::from_str(&stdout(&nielsen(&["degtyarev", "--json"]))).unwrap();
    let checks = v["report"]["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 9);
    assert!(checks.iter().all(|c| c["passed"] == true));
    assert_eq!(v["report"]["tau_sign"], -1);
    assert_eq!(v["certificate"]["r_plus"][4], "1/2");
}

#[test]
fn paper_suite_is_byte_identical() {
    let a = nielsen(&["paper-suite", "--json"]);
    let b = nielsen(&["paper-suite", "--json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert!(v["rows"].as_array().unwrap().len() > 150);
    let text = stdout(&nielsen(&["paper-suite"]));
    assert!(text.contains("Y_{1,0} = Enriques"));
}
