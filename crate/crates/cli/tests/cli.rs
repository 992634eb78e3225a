use std::fs;
use std::process::{Command, Output};

use imm_core::catalog::CatalogDocument;

fn imm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_imm")).args(args).output().expect("run imm")
}

fn code(args: &[&str]) -> i32 {
    imm(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    let out = imm(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

const IDENTITY_3_2: &str = r#"{"n":3,"q":2,"blocks":[
  [["1","0"],["0","1"]],
  [["1","0"],["0","1"]],
  [["1","0"],["0","1"]]
]}"#;

#[test]
fn eval_identity() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("id.json");
    fs::write(&path, IDENTITY_3_2).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(stdout(&["eval", p]), "2\n");
    assert!(stdout(&["eval", p, "--format", "json"]).contains("\"2/1\""));
}

#[test]
fn eval_cyclic_product() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    fs::write(&path, r#"{"n":2,"q":1,"blocks":[[["3/2"]],[["-4"]]]}"#).unwrap();
    assert_eq!(stdout(&["eval", path.to_str().unwrap()]), "-6\n");
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"n":1,"q":2,"blocks":[[["1","zz"],["0","1"]]]}"#).unwrap();
    let out = imm(&["eval", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("blocks[0][0][1]"));
    fs::write(&path, "{\"n\": 2,\n \"q\": ]").unwrap();
    let out = imm(&["eval", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(code(&["eval", dir.path().join("missing.json").to_str().unwrap()]), 2);
    assert_eq!(code(&["sing", "--n", "3"]), 2);
    assert_eq!(code(&["sing", "--n", "3", "--q", "two"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
}

#[test]
fn jacobian_needs_three_factors() {
    assert_eq!(code(&["jacobian", "--n", "2", "--q", "2"]), 2);
    assert_eq!(code(&["jacobian", "--n", "3", "--q", "2"]), 0);
}

#[test]
fn guards_exit_3() {
    assert_eq!(code(&["symmetry", "--n", "9", "--q", "3"]), 3);
    assert_eq!(code(&["hessian", "--n", "20", "--q", "4"]), 3);
}

#[test]
fn sing_json_round_trip() {
    let text = stdout(&["sing", "--n", "4", "--q", "2", "--format", "json"]);
    let doc = CatalogDocument::from_json(&text).unwrap();
    assert_eq!(doc.components.len(), 12);
    assert_eq!(doc.config.n, 4);
    assert!(doc.mismatches().is_empty());
    for c in &doc.components {
        assert!(c.verify_membership().unwrap(), "{}", c.label);
    }
    assert_eq!(doc.to_json().trim_end(), text.trim_end());
}

#[test]
fn csv_columns() {
    let text = stdout(&["jacobian", "--n", "3", "--q", "2", "--format", "csv"]);
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("kind,label,dim,dim_oracle"));
    assert_eq!(rows.count(), 6);
}

#[test]
fn output_is_deterministic() {
    for cmd in ["sing", "jacobian", "symmetry"] {
        let args = [cmd, "--n", "4", "--q", "3", "--seed", "7", "--trials", "3", "--format", "json"];
        assert_eq!(imm(&args).stdout, imm(&args).stdout, "{cmd}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cat.csv");
    let printed = stdout(&["sing", "--n", "3", "--q", "2", "--format", "csv"]);
    assert_eq!(stdout(&["sing", "--n", "3", "--q", "2", "--format", "csv", "--out", path.to_str().unwrap()]), "");
    assert_eq!(fs::read_to_string(&path).unwrap(), printed);
}

#[test]
fn injected_fault_exits_1() {
    assert_eq!(code(&["symmetry", "--n", "3", "--q", "2", "--trials", "4"]), 0);
    assert_eq!(code(&["symmetry", "--n", "3", "--q", "2", "--trials", "4", "--inject-fault"]), 1);
    assert_eq!(code(&["sing", "--n", "3", "--q", "2", "--inject-fault"]), 1);
    assert_eq!(code(&["jacobian", "--n", "3", "--q", "2", "--inject-fault"]), 1);
}

#[test]
fn hessian_report() {
    let text = stdout(&["hessian", "--n", "3", "--q", "3", "--trials", "2"]);
    assert!(text.contains("closed-form inverse: verified"), "{text}");
    assert!(text.contains("dual dim = 25"), "{text}");
    let text = stdout(&["symmetry", "--n", "4", "--q", "3", "--trials", "3"]);
    assert!(text.contains("dynkin stabilizer order: 8 (dihedral: yes)"), "{text}");
}

#[test]
fn degenerate_hessian_is_reported() {
    let out = imm(&["hessian", "--n", "3", "--q", "2", "--trials", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("a_n = 0"), "{text}");
    assert!(text.contains("dual dim = 8"), "{text}");
}
