use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn netcoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netcoh"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const SMALL: &str = r#"{
  "window": ["-2", "2"], "step": "1/2", "posetKind": "I", "seed": 7,
  "checks": [
    {"kind": "haag-duality", "tag": "Va", "count": 3},
    {"kind": "graded-locality", "samples": 20},
    {"kind": "braiding", "samples": 5},
    {"kind": "flip-check", "poset": {"window": ["-1", "1"], "step": "1"}}
  ]
}"#;

const AA_VA: &str = r#"{
  "window": ["-1", "5"], "step": "1/2", "posetKind": "D",
  "checks": [{"kind": "condition-aa", "tag": "Va",
              "pairs": [[{"type": "interval", "a": "0", "b": "1"}, {"type": "interval", "a": "3", "b": "4"}]],
              "poset": {"window": ["0", "4"], "step": "1"}}]
}"#;

fn no_floats(v: &Value) -> bool {
    match v {
        Value::Number(n) => !n.is_f64(),
        Value::Array(a) => a.iter().all(no_floats),
        Value::Object(o) => o.values().all(no_floats),
        _ => true,
    }
}

fn strip_timing(mut v: Value) -> Value {
    for c in v["checks"].as_array_mut().unwrap() {
        c["timingMs"] = Value::from(0);
    }
    v
}

#[test]
fn list_checks() {
    let o = netcoh(&["run", "--list-checks"]);
    assert!(o.status.success());
    let s = String::from_utf8(o.stdout).unwrap();
    for k in ["haag-duality", "condition-aa", "flip-check", "sector-table"] {
        assert!(s.contains(k), "{k}");
    }
}

#[test]
fn passing_scenario_writes_json_and_csv() {
    let d = tempfile::tempdir().unwrap();
    let sc = write(d.path(), "s.json", SMALL);
    let (out, csv) = (d.path().join("r.json"), d.path().join("t.csv"));
    let o = netcoh(&[
        "run",
        &sc,
        "--out",
        out.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
        "--jobs",
        "2",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["summary"]["passed"], 4);
    let names: Vec<&str> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(
        names,
        [
            "haag-duality(Va)",
            "graded-locality",
            "braiding",
            "flip-check"
        ]
    );
    assert!(no_floats(&r));
    let table = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(table.lines().count(), 5);
    assert!(table.starts_with("check,status,dimensions,time_ms"));
}

#[test]
fn failing_check_exits_one_with_exact_witness() {
    let d = tempfile::tempdir().unwrap();
    let sc = write(d.path(), "aa.json", AA_VA);
    let o = netcoh(&["run", &sc]);
    assert_eq!(o.status.code(), Some(1));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    let c = &r["checks"][0];
    assert_eq!(c["status"], "fail");
    let w = &c["witness"]["witness"];
    assert!(w["f0"]["breakpoints"].is_array(), "{w}");
    let text = w.to_string();
    assert!(!text.contains('.'), "{text}");
    assert!(no_floats(&r));
}

#[test]
fn parse_and_validation_errors_exit_two() {
    let d = tempfile::tempdir().unwrap();
    let bad = write(
        d.path(),
        "bad.json",
        &SMALL.replace("haag-duality", "haag-dualty"),
    );
    let o = netcoh(&["run", &bad]);
    assert_eq!(o.status.code(), Some(2));
    let msg = String::from_utf8(o.stderr).unwrap();
    assert!(msg.contains("haag-dualty") && msg.contains("line"), "{msg}");
    let asym = write(
        d.path(),
        "asym.json",
        r#"{"window": ["0", "4"], "step": "1", "posetKind": "I", "checks": [{"kind": "flip-check"}]}"#,
    );
    assert_eq!(netcoh(&["run", &asym]).status.code(), Some(2));
    assert_eq!(netcoh(&["run"]).status.code(), Some(2));
}

#[test]
fn deterministic_given_seed() {
    let d = tempfile::tempdir().unwrap();
    let sc = write(d.path(), "s.json", SMALL);
    let a: Value = serde_json::from_slice(&netcoh(&["run", &sc]).stdout).unwrap();
    let b: Value = serde_json::from_slice(&netcoh(&["run", &sc, "--jobs", "3"]).stdout).unwrap();
    assert_eq!(strip_timing(a), strip_timing(b));
    let c: Value = serde_json::from_slice(&netcoh(&["run", &sc, "--seed", "99"]).stdout).unwrap();
    assert_eq!(c["seed"], 99);
    assert_eq!(c["scenario"]["seed"], 99);
}
