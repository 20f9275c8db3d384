use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn ybe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ybe")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ybe-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, text: &[u8]) -> String {
    let p = scratch(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn fixture_file(name: &str) -> String {
    let o = ybe(&["construct", "fixture", name]);
    assert_eq!(code(&o), 0);
    write(&format!("{name}.json"), &o.stdout)
}

#[test]
fn analyze_examp1() {
    let o = ybe(&["analyze", &fixture_file("examp1")]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["group_order"], 8);
    assert_eq!(v["simple"], true);
    assert_eq!(v["block_systems"], serde_json::json!([[[1, 4], [2, 3]]]));
}

#[test]
fn analyze_trivial_and_corrupt() {
    let f = write("trivial.json", br#"{"n":3,"sigma":[[0,1,2],[0,1,2],[0,1,2]]}"#);
    let v = json(&ybe(&["analyze", &f]));
    assert_eq!(v["simple"], false);
    assert_eq!(v["multipermutation_level"], 1);

    let f = write("corrupt.json", b"{\"n\": 3, \"sigma\": [[0,1");
    assert_eq!(code(&ybe(&["analyze", &f])), 2);
    let f = write("ragged.json", br#"{"n":2,"sigma":[[0,1],[0]]}"#);
    assert_eq!(code(&ybe(&["verify", &f])), 2);
    let f = write("axioms.json", br#"{"n":2,"sigma":[[0,1],[1,0]]}"#);
    let o = ybe(&["analyze", &f]);
    assert_eq!(code(&o), 3);
    assert_eq!(json(&o)["ybe"], false);
}

#[test]
fn iso_verdicts() {
    let (a, b) = (fixture_file("examp1"), fixture_file("examp2"));
    let o = ybe(&["iso", &a, &a]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["map"], serde_json::json!([1, 2, 3, 4]));
    assert_eq!(code(&ybe(&["iso", &a, &b])), 1);

    let sq = ybe(&["construct", "square", "--n", "3", "--t", "1", "--j", "0,1,1"]);
    assert_eq!(code(&sq), 0);
    let sq = write("sq3.json", &sq.stdout);
    assert_eq!(code(&ybe(&["iso", &fixture_file("nine_r1"), &sq])), 0);
}

#[test]
fn construct_matches_library() {
    let o = ybe(&["construct", "p2", "--p", "7", "--t", "2", "--j", "0,1,2,4,4,2,1"]);
    assert_eq!(code(&o), 0);
    let lib = ybe_core::families::p2_solution(7, 2, &[0, 1, 2, 4, 4, 2, 1]).unwrap();
    assert_eq!(String::from_utf8(o.stdout).unwrap().trim(), lib.to_json());
    assert!(!o.stderr.is_empty());

    assert_eq!(code(&ybe(&["construct", "rect", "--m", "2", "--n", "3"])), 3);
    assert_eq!(code(&ybe(&["construct", "square", "--n", "3", "--t", "1", "--j", "0,1,2"])), 2);
    assert_eq!(code(&ybe(&["construct", "fixture", "nope"])), 2);
    let o = ybe(&["construct", "perm", "--n", "3", "--sigma", "(1,2,3)"]);
    assert_eq!(json(&o)["sigma"], serde_json::json!([[1, 2, 0], [1, 2, 0], [1, 2, 0]]));
}

#[test]
fn simple_check_and_retract() {
    assert_eq!(code(&ybe(&["simple-check", &fixture_file("nine_r2")])), 0);
    let o = ybe(&["simple-check", &fixture_file("exnonsimple")]);
    assert_eq!(code(&o), 1);
    assert!(json(&o)["witness"].is_array());

    let f = write("trivial2.json", br#"{"n":3,"sigma":[[0,1,2],[0,1,2],[0,1,2]]}"#);
    let o = ybe(&["retract", &f]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["n"], 1);
}

#[test]
fn cover_examp1() {
    let o = ybe(&["cover", &fixture_file("examp1"), "--x", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["n"], 8);
}

#[test]
fn brace_commands() {
    let o = ybe(&["brace", "asym", "--n", "2", "--j", "0,1"]);
    assert_eq!(code(&o), 0);
    let f = write("b01.json", &o.stdout);
    let c = ybe(&["brace", "check", &f]);
    assert_eq!(code(&c), 0);
    assert_eq!(json(&c)["order"], 8);
    assert_eq!(json(&c)["socle"], serde_json::json!([0]));

    let r = ybe(&["brace", "asym", "--n", "2", "--j", "0,1", "--restrict"]);
    let r = write("r01.json", &r.stdout);
    assert_eq!(code(&ybe(&["iso", &r, &fixture_file("examp1")])), 0);

    let o = ybe(&["brace", "of-solution", &fixture_file("examp1")]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["order"], 8);

    // multiplication row 1 is not a bijection
    let bad = br#"{"order":4,"add":[[0,1,2,3],[1,0,3,2],[2,3,0,1],[3,2,1,0]],"mul":[[0,1,2,3],[1,1,3,2],[2,3,0,1],[3,2,1,0]]}"#;
    assert_eq!(code(&ybe(&["brace", "check", &write("bad.json", bad)])), 3);
    assert_eq!(code(&ybe(&["brace", "asym", "--n", "3", "--j", "0,1,2"])), 2);
}

#[test]
fn census_commands() {
    let out = scratch("c4.jsonl");
    let o = ybe(&["census", "--n", "4", "--require", "indecomposable,irretractable", "--jobs", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&out).unwrap();
    let lib = ybe_core::census::enumerate(
        &ybe_core::census::CensusSpec::new(4).with_constraints(&[
            ybe_core::census::Constraint::Indecomposable,
            ybe_core::census::Constraint::Irretractable,
        ]),
    )
    .unwrap();
    let mut want = Vec::new();
    ybe_core::census::write_jsonl(&lib, &mut want).unwrap();
    assert_eq!(text.as_bytes(), want.as_slice());

    let cp = scratch("cp.json");
    let cps = cp.to_str().unwrap();
    let o = ybe(&["census", "--n", "4", "--checkpoint", cps, "--stop-after", "1"]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let o = ybe(&["census", "--n", "4", "--checkpoint", cps]);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 23);
    assert_eq!(code(&ybe(&["census", "--n", "4", "--require", "simple", "--checkpoint", cps])), 2);

    assert_eq!(code(&ybe(&["census", "--n", "8"])), 4);
    assert_eq!(code(&ybe(&["census", "--n", "4", "--require", "bogus"])), 2);
    let o = ybe(&["census", "--n", "4", "--require", "block_form(2)"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 2);
}
