use std::process::Command;

use indkit::{PolyMap, VectorField};
use serde_json::{json, Value};

fn indkit(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_indkit")).args(args).output().expect("run indkit");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(stdout.trim()).unwrap_or_else(|e| panic!("{e}: {stdout:?}"));
    (out.status.code().unwrap(), v)
}

fn ok(args: &[&str]) -> Value {
    let (code, v) = indkit(args);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["ok"], json!(true));
    assert_eq!(v["error"], Value::Null);
    v["result"].clone()
}

fn err(args: &[&str], code: i32, kind: &str) {
    let (c, v) = indkit(args);
    assert_eq!(c, code, "{v}");
    assert_eq!(v["ok"], json!(false));
    assert_eq!(v["error"]["kind"], json!(kind));
}

#[test]
fn compose_is_canonical() {
    let r = ok(&["compose", "(x+y^2, y)", "(x, y+x^2)"]);
    assert_eq!(r, json!("(x^4 + 2*x^2*y + y^2 + x, x^2 + y)"));
    let (_, raw) = indkit(&["compose", "(x+y^2, y)", "(x, y+x^2)"]);
    assert_eq!(
        raw.to_string(),
        r#"{"ok":true,"result":"(x^4 + 2*x^2*y + y^2 + x, x^2 + y)","error":null}"#
    );
}

#[test]
fn bracket_example() {
    assert_eq!(ok(&["bracket", "[y, 0]", "[0, x]"]), json!("[-x, y]"));
}

#[test]
fn lemma_coefficients() {
    let r = ok(&["check-lemma-342", "--kmax", "3"]);
    assert_eq!(r["coefficients"], json!(["1", "2", "42"]));
}

#[test]
fn outputs_reparse() {
    let g = ok(&["invert", "(y^3 + x + 1, y)"]);
    let g = PolyMap::parse(g.as_str().unwrap()).unwrap();
    assert_eq!(g.to_string(), "(-y^3 + x - 1, y)");
    let d = ok(&["log", "(x1 + x2^2, x2 + x3, x3)"]);
    let d = VectorField::parse(d.as_str().unwrap()).unwrap();
    let e = ok(&["exp", &d.to_string()]);
    assert_eq!(e["map"], json!("(x2^2 + x1, x2 + x3, x3)"));
}

#[test]
fn rationals_are_strings() {
    let r = ok(&["exp", "[y^2, 0]", "--t", "-1/2"]);
    assert_eq!(r["map"], json!("(-1/2*y^2 + x, y)"));
    let j = ok(&["jacobian", "(1/2*x + y^2, y)"]);
    assert_eq!(j["matrix"], json!([["1/2", "2*y"], ["0", "1"]]));
    assert_eq!(j["determinant"], json!("1/2"));
}

#[test]
fn closure_and_caps() {
    let r = ok(&["closure", "[y, 0]", "[0, x]"]);
    assert_eq!(r["status"], json!("closed"));
    assert_eq!(r["dimension"], json!(3));
    let r = ok(&["closure", "--dim-cap", "10", "[x^3, -3*x^2*y]", "[-3*x*y^2, y^3]"]);
    assert_eq!(r["status"], json!("dim_cap_exceeded"));
}

#[test]
fn caps_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_indkit"))
        .args(["closure", "[x^3, -3*x^2*y]", "[-3*x*y^2, y^3]"])
        .env("INDKIT_DIM_CAP", "7")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["status"], json!("dim_cap_exceeded"));
    assert!(v["result"]["dimension"].as_u64().unwrap() <= 8);
}

#[test]
fn plane_words() {
    let r = ok(&["normal-form", "--word", "u v U"]);
    assert_eq!(r["length"], json!(3));
    assert_eq!(r["recomposition_check"], json!(true));
    let r = ok(&["jvk", "(y^6 + 2*x*y^3 + 2*y^3 + x^2 + 2*x + y + 1, y^3 + x + 1)"]);
    assert_eq!(r["degrees"], json!([2, 3]));
    assert_eq!(r["recomposition_check"], json!(true));
    assert_eq!(ok(&["member-f", "(x + y^2, y)"])["member"], json!(true));
    assert_eq!(ok(&["torus-limit", "(x + 18*y^5 + x^2, y)", "--weights", "5", "1"]), json!("(18*y^5 + x, y)"));
}

#[test]
fn exit_codes() {
    err(&["invert", "(x + y^2, x)"], 1, "not_an_automorphism");
    err(&["normal-form", "(x + y^3, y)"], 1, "not_s_invariant");
    err(&["torus-limit", "(x + y, y)", "--weights", "2", "1"], 1, "no_limit");
    err(&["compose", "(x+, y)", "(x, y)"], 2, "parse");
    err(&["no-such-command"], 2, "usage");
    err(&["compose", "(x, y)", "(x, y)", "--bogus"], 2, "usage");
}

#[test]
fn verify_subset() {
    let r = ok(&["verify-all", "--only", "2", "10"]);
    assert_eq!(r["passed"], json!(2));
    let (code, v) = indkit(&["verify-all", "--only", "1"]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["criteria"][0]["passed"], json!(false));
    assert_eq!(v["error"]["kind"], json!("check_failed"));
}
