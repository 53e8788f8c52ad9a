use std::process::{Command, Output};

use serde_json::Value;

fn weilrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weilrep")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn gauss_p5() {
    let out = weilrep(&["gauss", "--p", "5"]);
    assert!(out.status.success());
    let v = json(&out);
    let re = v["rows"][0]["re"].as_f64().unwrap();
    assert!((re - 5f64.sqrt()).abs() < 1e-9);
    assert_eq!(v["rows"][0]["t"], 1);
}

#[test]
fn gauss_rejects_non_prime() {
    let out = weilrep(&["gauss", "--p", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not an odd prime"));
}

#[test]
fn gauss_over_ring() {
    let out = weilrep(&["gauss", "--ring", "F9", "--m", "1", "--eps", "-1", "--T", "I"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["character"]["admissible"], true);
    // |G_1|² = |B| = 9.
    let (re, im) = (v["sums"][0]["re"].as_f64().unwrap(), v["sums"][0]["im"].as_f64().unwrap());
    assert!((re * re + im * im - 9.0).abs() < 1e-9);
}

#[test]
fn verify_relations_passes() {
    let out = weilrep(&["verify", "--ring", "F3", "--m", "1", "--eps", "-1", "--suite", "relations"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["pass"], true);
    let names: Vec<&str> =
        v["suites"][0]["checks"]["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names.len(), 6);
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--ring", "F9", "--m", "1", "--eps", "-1", "--suite", "data-axioms,homomorphism", "--seed", "3"];
    let a = weilrep(&args);
    let b = weilrep(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn index_o4() {
    let out = weilrep(&["index", "--ring", "F3", "--m", "2", "--eps", "+1"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["index"], 2);
    assert_eq!(v["T_in_ssl"], false);
    assert_eq!(v["ssl_order"], 576);
}

#[test]
fn notlocal_suite() {
    let out = weilrep(&["verify", "--ring", "M2F3", "--suite", "notlocal"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["pass"], true);
}

#[test]
fn weil_dump_writes_file() {
    let path = std::env::temp_dir().join(format!("weilrep-cli-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let out = weilrep(&["weil", "--ring", "F3", "--m", "1", "--eps", "-1", "--gen", "u", "--param", "1", "--out", p]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(v["operator"]["dim"], 3);
}

#[test]
fn bad_inputs_exit_2() {
    assert_eq!(weilrep(&["verify", "--ring", "F3", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(weilrep(&["verify", "--ring", "F3", "--m", "2", "--eps", "+1", "--suite", "relations"]).status.code(), Some(2));
    assert_eq!(weilrep(&["index", "--ring", "Q7"]).status.code(), Some(2));
}
