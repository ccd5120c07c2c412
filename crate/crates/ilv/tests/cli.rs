use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn ilv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ilv")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn value(out: &Output) -> f64 {
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).expect("json output");
    json["value"].as_f64().expect("finite value")
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

#[test]
fn interval_against_empty() {
    let out = ilv(&["interleave", "--a", "interval:0,2", "--b", "empty"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(value(&out), 1.0);
}

#[test]
fn scaling_family_by_bisection() {
    let e2 = format!("interval:1,{}", std::f64::consts::E.powi(2));
    let out = ilv(&["interleave", "--family", "mult", "--a", &e2, "--b", "empty", "--method", "bisect"]);
    assert_eq!(out.status.code(), Some(0));
    assert!((value(&out) - 1.0).abs() < 1e-5);
}

#[test]
fn identical_rectangles_are_at_zero() {
    let out = ilv(&["interleave", "--family", "shift", "--a", "rect:0,0;2,2", "--b", "rect:0,0;2,2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(value(&out), 0.0);
}

#[test]
fn bad_literal_is_a_parse_error() {
    let out = ilv(&["interleave", "--a", "interval:3", "--b", "empty"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn unknown_flag_is_a_parse_error() {
    assert_eq!(ilv(&["gh", "--nope"]).status.code(), Some(1));
}

#[test]
fn gh_of_a_space_with_itself() {
    let m = scratch("square.csv", "0,1,2\n1,0,1\n2,1,0\n");
    let m = m.to_str().unwrap();
    let out = ilv(&["gh", "--x", m, "--y", m]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "gh,altered,modified\n0,0,0\n");
}

#[test]
fn gh_enumeration_cap() {
    let m = scratch("capped.csv", "0,1,2\n1,0,1\n2,1,0\n");
    let m = m.to_str().unwrap();
    let out = ilv(&["gh", "--x", m, "--y", m, "--cap", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_file_is_an_io_error() {
    let out = ilv(&["gh", "--x", "/nonexistent/x.csv", "--y", "/nonexistent/y.csv"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn audits_are_clean() {
    let out = ilv(&["audit"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn stability_summary() {
    let csv = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("stability.csv");
    let out = ilv(&["stability", "--trials", "100", "--grid", "5", "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let summary = String::from_utf8_lossy(&out.stderr);
    assert!(summary.starts_with("100/100 bound satisfied"), "{summary}");
    let rows = fs::read_to_string(&csv).unwrap();
    assert!(rows.lines().count() > 100);
}

#[test]
fn reproduce_flags_the_off_row() {
    let out = ilv(&["reproduce"]);
    assert_eq!(out.status.code(), Some(3));
    let text = stdout(&out);
    assert!(text.starts_with("id,expected,computed,abs_error,tolerance,status"));
    assert_eq!(text.lines().filter(|l| l.ends_with(",FAIL")).count(), 1);
}

#[test]
fn emitted_instance_round_trips() {
    let listed = stdout(&ilv(&["twocat", "list"]));
    assert!(listed.lines().any(|l| l == "delooping Z/4"));
    let emitted = ilv(&["twocat", "emit", "--instance", "action Z/6 discrete"]);
    assert_eq!(emitted.status.code(), Some(0));
    let path = scratch("z6.txt", &stdout(&emitted));
    let path = path.to_str().unwrap();
    let out = ilv(&["twocat", "distance", "--file", path, "--a", "0", "--b", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(value(&out) > 0.0);
    let same = ilv(&["twocat", "distance", "--file", path, "--a", "2", "--b", "2"]);
    assert_eq!(value(&same), 0.0);
}
