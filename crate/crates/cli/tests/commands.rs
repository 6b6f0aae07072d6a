use std::path::PathBuf;
use std::process::Command;

use mixmult_cli::run_args;
use serde_json::{json, Value};

fn inst(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../instances")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> (Value, i32) {
    let out = run_args(std::iter::once("mixmult").chain(args.iter().copied()));
    let doc = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout));
    (doc, out.code)
}

#[test]
fn br_on_mf_reports_the_leading_form() {
    let (doc, code) = run(&["br", &inst("mF.inst")]);
    assert_eq!(code, 0);
    assert_eq!(
        doc["leading_form"],
        json!({"e[3,0]": "3", "e[2,1]": "1", "e[1,2]": "0", "e[0,3]": "0"})
    );
    assert_eq!(
        doc["r"],
        json!({"value": "3", "source": "krull-dimension-minus-one"})
    );
    assert_eq!(doc["table"]["axes"], json!(["p", "n"]));
    for key in ["query", "table", "r", "leading_form", "certificates"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn verify_all_on_the_corpus_exits_zero() {
    let (doc, code) = run(&["verify", "all"]);
    assert_eq!(code, 0, "{doc}");
    let v = &doc["verification"];
    assert_eq!(v["passed"], v["checks"]);
    assert!(v["reports"].as_array().unwrap().len() > 60);
}

#[test]
fn lambda_with_empty_h_is_a_support_condition() {
    let (doc, code) = run(&["lambda", &inst("empty-h.inst")]);
    assert_eq!(code, 1);
    assert_eq!(doc["error"]["kind"], json!("support-condition"));
}

#[test]
fn mixed_on_newton_pair() {
    let (doc, code) = run(&["mixed", &inst("newton-pair.inst")]);
    assert_eq!(code, 0);
    let lf = &doc["leading_form"];
    assert_eq!(lf["e[2,0,0]"], json!("2"));
    assert_eq!(lf["e[1,1,0]"], json!("1"));
    assert_eq!(lf["e[0,2,0]"], json!("2"));
}

#[test]
fn samuel_and_spread() {
    let (doc, code) = run(&["samuel", &inst("samuel-squares.inst")]);
    assert_eq!(code, 0);
    assert_eq!(doc["multiplicity"], json!("4"));
    let (doc, _) = run(&["spread", &inst("samuel-x.inst")]);
    assert_eq!(doc["maximal_analytic_spread"], json!(false));
    let (doc, _) = run(&["spread", &inst("samuel-m.inst")]);
    assert_eq!(doc["maximal_analytic_spread"], json!(true));
}

#[test]
fn csv_emits_the_table_alone() {
    let out = run_args([
        "mixmult",
        "lambda",
        &inst("mF.inst"),
        "--csv",
        "--grid",
        "3",
    ]);
    assert_eq!(out.code, 0);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "p,n,value");
    assert_eq!(lines.len(), 10);
    assert!(lines.contains(&"2,1,12"));
}

#[test]
fn modp_reduction_gives_the_same_answer() {
    let (q, _) = run(&["br", &inst("cokernel.inst")]);
    let (p, _) = run(&["br", &inst("cokernel.inst"), "--modp", "7"]);
    assert_eq!(q["leading_form"], p["leading_form"]);
    let (err, code) = run(&["br", &inst("cokernel.inst"), "--modp", "8"]);
    assert_eq!(code, 1);
    assert!(err["error"]["message"]
        .as_str()
        .unwrap()
        .contains("not prime"));
}

#[test]
fn parse_errors_carry_a_position() {
    let dir = std::env::temp_dir().join(format!("mixmult-cmd-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.inst");
    std::fs::write(
        &path,
        "ring base x y fiber u\nsubmodule H fiberdeg 1 gens x*u + y\n",
    )
    .unwrap();
    let (doc, code) = run(&["br", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(doc["error"]["line"], json!("2"));
    assert!(doc["error"].get("column").is_some());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn binary_exit_code_and_stdout() {
    let out = Command::new(env!("CARGO_BIN_EXE_mixmult"))
        .args(["lambda", &inst("empty-h.inst")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["error"]["kind"], json!("support-condition"));

    let out = Command::new(env!("CARGO_BIN_EXE_mixmult"))
        .args(["br", &inst("m-squared.inst")])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["leading_form"]["e[2,0]"], json!("4"));
}
