use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bellgap(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellgap"))
        .args(args)
        .current_dir(dir)
        .env_remove("BELLGAP_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn make_game_writes_expected_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(bellgap(&["make-game", "chsh", "--out", "chsh.json"], d).status.success());
    let chsh = json(&d.join("chsh.json"));
    let coeffs = chsh["coeffs"].as_array().unwrap();
    assert_eq!(coeffs.len(), 8);
    assert!(coeffs.iter().all(|c| c["v"] == 0.25));

    assert!(bellgap(&["make-game", "kv", "--l", "2", "--out", "kv.json"], d).status.success());
    let kv = json(&d.join("kv.json"));
    assert_eq!(kv["inputs"], serde_json::json!([4, 4]));
    assert_eq!(kv["outputs"], serde_json::json!([4, 4]));

    assert!(bellgap(&["make-game", "hat", "--in", "chsh.json", "--out", "hat.json"], d).status.success());
    let hat = json(&d.join("hat.json"));
    assert_eq!(hat["inputs"], serde_json::json!([4, 4, 4]));
    assert_eq!(hat["meta"]["recipe"]["name"], "hat");
}

#[test]
fn value_prints_class_values() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    bellgap(&["make-game", "chsh", "--out", "chsh.json"], d);
    bellgap(&["make-game", "hadamard-cor", "--n", "4", "--out", "h4.json"], d);
    let local = bellgap(&["value", "chsh.json", "--class", "local"], d);
    assert!(stdout(&local).contains("local 0.75 "), "{}", stdout(&local));
    let ns = bellgap(&["value", "chsh.json", "--class", "ns", "--certificate", "cert.json"], d);
    let v: f64 = stdout(&ns).split_whitespace().nth(2).unwrap().parse().unwrap();
    assert!((v - 1.0).abs() < 1e-9);
    let cert = json(&d.join("cert.json"));
    assert_eq!(cert["certificate"]["type"], "behaviour");
    let h = bellgap(&["value", "h4.json", "--class", "ns-cor"], d);
    assert!(stdout(&h).contains("ns-cor 16 "));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    bellgap(&["make-game", "chsh", "--out", "chsh.json"], d);
    let budget = bellgap(&["value", "chsh.json", "--class", "local", "--budget", "5"], d);
    assert_eq!(budget.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&budget.stderr).contains("2^2"));

    let env = Command::new(env!("CARGO_BIN_EXE_bellgap"))
        .args(["value", "chsh.json", "--class", "local"])
        .env("BELLGAP_BUDGET", "5")
        .current_dir(d)
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(3));

    assert_eq!(bellgap(&["make-game", "nope"], d).status.code(), Some(2));
    assert_eq!(bellgap(&["make-game", "kv"], d).status.code(), Some(2));
    assert_eq!(bellgap(&["value", "chsh.json", "--class", "best"], d).status.code(), Some(2));
    assert_eq!(bellgap(&["value", "missing.json", "--class", "local"], d).status.code(), Some(2));
    assert_eq!(bellgap(&["verify", "lemma9"], d).status.code(), Some(2));
    assert_eq!(bellgap(&["value", "chsh.json", "--class", "local-cor"], d).status.code(), Some(2));
}

#[test]
fn verify_report_flags_are_recomputable() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = bellgap(&["verify", "thm2", "--out", "thm2.json"], d);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).lines().all(|l| l.starts_with("PASS")));
    let report = json(&d.join("thm2.json"));
    for c in report["checks"].as_array().unwrap() {
        let (lhs, rhs, tol) = (c["lhs"].as_f64().unwrap(), c["rhs"].as_f64().unwrap(), c["tolerance"].as_f64().unwrap());
        let pass = match c["relation"].as_str().unwrap() {
            "<=" => lhs <= rhs + tol,
            ">=" => lhs >= rhs - tol,
            "==" => (lhs - rhs).abs() <= tol,
            r => panic!("relation {r}"),
        };
        assert_eq!(Some(pass), c["pass"].as_bool(), "{c}");
    }
    assert!(bellgap(&["verify", "lemma1", "--samples", "4"], d).status.success());
}

#[test]
fn report_lists_classes_and_ratios() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    bellgap(&["make-game", "chsh", "--out", "chsh.json"], d);
    let out = bellgap(&["report", "chsh.json", "--out", "r.json"], d);
    assert!(out.status.success());
    let r = json(&d.join("r.json"));
    let classes: Vec<&str> = r["values"].as_array().unwrap().iter().map(|v| v["class"].as_str().unwrap()).collect();
    assert_eq!(classes, ["local", "ns", "quantum-lower"]);
    let ns_ratio = r["lv_ratios"][0]["ratio"].as_f64().unwrap();
    assert!((ns_ratio - 4.0 / 3.0).abs() < 1e-9);
}
