use std::process::{Command, Output};

use serde_json::Value;

fn chowkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chowkit")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_all_passes() {
    let o = chowkit(&["verify", "--all"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.lines().all(|l| !l.starts_with("FAIL")));
    assert!(out.ends_with("23/23 cases passed\n"));
}

#[test]
fn verify_json_round_trips_and_is_deterministic() {
    let a = chowkit(&["verify", "--all", "--format", "json"]);
    let b = chowkit(&["--format", "json", "verify", "--all"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let v: Value = serde_json::from_str(&text).unwrap();
    let mut again = serde_json::to_string_pretty(&v).unwrap();
    again.push('\n');
    assert_eq!(again, text);
    let cases = v.as_array().unwrap();
    assert_eq!(cases.len(), 23);
    for c in cases {
        let keys: Vec<&String> = c.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["case", "expected", "millis", "params", "pass", "result"]);
        assert_eq!(c["pass"], true);
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let one = Command::new(env!("CARGO_BIN_EXE_chowkit"))
        .args(["verify", "--format", "json"])
        .env("CHOWKIT_THREADS", "1")
        .output()
        .unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_chowkit"))
        .args(["verify", "--format", "json"])
        .env("CHOWKIT_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_chowkit"))
        .args(["verify"])
        .env("CHOWKIT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn compute_fixed_locus_json() {
    let o = chowkit(&["compute", "fixed-locus", "--r", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["case"], "fixed-locus-r2");
    assert_eq!(v["params"]["r"], 2);
    assert_eq!(v["params"]["n"], 9);
    assert_eq!(v["result"]["monomials"], serde_json::json!(["c1^3", "c1*c2", "c3"]));
    assert_eq!(v["result"]["coefficients"], serde_json::json!(["-20", "110", "49"]));
    assert_eq!(v["expected"]["provenance"], "paper");
}

#[test]
fn compute_text_outputs() {
    let o = chowkit(&["compute", "fixed-locus", "--r", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("21c2"));
    let o = chowkit(&["compute", "deg", "--r", "9"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("deg = 1048576"));
    let o = chowkit(&["compute", "psi-h", "--r", "2"]);
    assert!(stdout(&o).contains("Psi*h = 10h"));
    let o = chowkit(&["compute", "strata"]);
    assert!(stdout(&o).contains("rho=1=10"));
    let o = chowkit(&["compute", "det-degrees", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["coefficients"], serde_json::json!(["7", "4"]));
    let o = chowkit(&["compute", "dims", "--r", "2"]);
    assert!(stdout(&o).contains("dim_I=227"));
}

#[test]
fn verify_single_case() {
    let o = chowkit(&["verify", "--case", "voisin-degree-r2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS voisin-degree-r2"));
}

#[test]
fn usage_errors() {
    for args in [
        vec!["frobnicate"],
        vec!["verify", "--everything"],
        vec!["verify", "--case", "no-such-case"],
        vec!["compute", "deg"],
        vec!["compute", "fixed-locus", "--r", "4"],
        vec!["compute", "teleport", "--r", "1"],
        vec!["--format", "yaml", "verify"],
        vec![],
    ] {
        let o = chowkit(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn failing_check_exits_1() {
    // Form rank 1 has no proper strata: an audit failure.
    let o = chowkit(&["verify", "--case", "strata-m1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("strata-m1"));
    assert!(stdout(&o).starts_with("FAIL strata-m1"));
}
