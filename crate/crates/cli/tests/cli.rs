use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_formality-lab"))
        .args(args)
        .env("FORMALITY_LAB_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = lab(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    lab(args).status.code().expect("exit code")
}

fn path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_json(p: &Path, v: &Value) {
    std::fs::write(p, serde_json::to_string_pretty(v).unwrap()).unwrap();
}

/// Λ(x, y) with μ²(a2, a1) = (-1)^{|a1|} a2·a1.
fn exterior_json() -> Value {
    let e = |a: &str, b: &str, out: &str, c: &str| json!({"inputs": [a, b], "output": [[out, c]]});
    let mut entries = Vec::new();
    for (l, deg) in [("1", 0), ("x", 1), ("y", 1), ("xy", 2)] {
        let sign = if deg % 2 == 1 { "-1" } else { "1" };
        entries.push(e("1", l, l, sign));
        if l != "1" {
            entries.push(e(l, "1", l, "1"));
        }
    }
    entries.push(e("x", "y", "xy", "-1"));
    entries.push(e("y", "x", "xy", "1"));
    json!({
        "field": "Q",
        "basis": [
            {"label": "1", "degree": 0},
            {"label": "x", "degree": 1},
            {"label": "y", "degree": 1},
            {"label": "xy", "degree": 2}
        ],
        "products": [{"arity": 2, "entries": entries}],
        "max_arity": 5,
        "strict_units": ["1"]
    })
}

#[test]
fn matchings_listing() {
    let v: Value = serde_json::from_str(&ok(&["matchings", "3", "--format", "json"])).unwrap();
    assert_eq!(v["count"], 5);
    assert_eq!(v["catalan"], 5);
    assert_eq!(v["matchings"][0], "1-2,3-4,5-6");
    let table = ok(&["matchings", "4"]);
    assert_eq!(table.lines().count(), 15);
    assert_eq!(code(&["matchings", "0"]), 2);
}

#[test]
fn build_is_deterministic_and_reloadable() {
    let dir = tempfile::tempdir().unwrap();
    let a = path(dir.path(), "a.json");
    ok(&["build", "2", "--out", s(&a)]);
    let first = std::fs::read_to_string(&a).unwrap();
    assert_eq!(ok(&["build", "2"]), first);
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["objects"].as_array().unwrap().len(), 2);
    assert_eq!(v["basis"].as_array().unwrap().len(), 12);
    let f7 = ok(&["build", "2", "--field", "Fp:7"]);
    assert!(f7.contains("\"Fp:7\""));
    assert_eq!(code(&["build", "2", "--field", "Fp:8"]), 2);
}

#[test]
fn twist_then_formalize_recovers_the_category() {
    let dir = tempfile::tempdir().unwrap();
    let a = path(dir.path(), "a.json");
    let t = path(dir.path(), "t.json");
    let b = path(dir.path(), "b.json");
    let phi = path(dir.path(), "phi.json");
    let f = path(dir.path(), "f.json");
    let g = path(dir.path(), "g.json");
    ok(&["build", "2", "--out", s(&a)]);
    let twist = ["twist", s(&a), "--seed", "11", "--arities", "2-3", "--density", "0.2"];
    ok(&[&twist[..], &["--out", s(&t), "--field-out", s(&b), "--phi-out", s(&phi)]].concat());
    let again = ok(&twist);
    assert_eq!(again, std::fs::read_to_string(&t).unwrap(), "twist is seeded");
    assert_ne!(std::fs::read_to_string(&t).unwrap(), std::fs::read_to_string(&a).unwrap());

    let tr: Value = serde_json::from_str(&ok(&[
        "formalize", s(&t), "--field-source", "file", "--field-file", s(&b), "--out", s(&f), "--seed", "11",
    ]))
    .unwrap();
    assert!(tr["weights"].as_array().is_some_and(|w| w.len() == 4));
    assert!(tr["stages"].as_array().unwrap().iter().any(|st| !st["phi"].as_array().unwrap().is_empty()));
    let ident: Value = serde_json::from_str(&ok(&["formalize", s(&a), "--field-source", "euler"])).unwrap();
    assert!(ident["stages"].as_array().unwrap().iter().all(|st| st["skipped"] == true));
    assert_eq!(tr["seed"], 11);
    assert!(tr["certificates"].as_object().unwrap().values().all(|c| c == true));
    assert!(tr.get("timings").is_none());
    assert_eq!(std::fs::read_to_string(&f).unwrap(), std::fs::read_to_string(&a).unwrap());

    ok(&["formalize", s(&t), "--field-source", "solve", "--search", "full", "--out", s(&g)]);
    assert_eq!(std::fs::read_to_string(&g).unwrap(), std::fs::read_to_string(&a).unwrap());

    let timed: Value = serde_json::from_str(&ok(&["formalize", s(&a), "--timings"])).unwrap();
    assert!(timed["timings"]["formalize"].is_number());
}

#[test]
fn total_algebra_twist_is_formalized() {
    let dir = tempfile::tempdir().unwrap();
    let a = path(dir.path(), "a.json");
    let t = path(dir.path(), "t.json");
    let f = path(dir.path(), "f.json");
    let tr = path(dir.path(), "tr.json");
    ok(&["build", "2", "--max-arity", "5", "--out", s(&a)]);
    ok(&["twist", s(&a), "--total", "--seed", "7", "--arities", "2-3", "--density", "0.02", "--out", s(&t)]);
    let tv: Value = serde_json::from_str(&std::fs::read_to_string(&t).unwrap()).unwrap();
    assert!(tv.get("objects").is_none());
    assert!(tv["products"].as_array().unwrap().iter().any(|c| c["arity"] == 3));
    ok(&["formalize", s(&t), "--out", s(&f), "--transcript", s(&tr)]);
    let fv: Value = serde_json::from_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
    let arities: Vec<_> = fv["products"].as_array().unwrap().iter().map(|c| c["arity"].clone()).collect();
    assert_eq!(arities, vec![json!(2)]);
    assert_eq!(fv["products"][0], tv["products"][0]);
    let trv: Value = serde_json::from_str(&std::fs::read_to_string(&tr).unwrap()).unwrap();
    assert_eq!(trv["stages"].as_array().unwrap().len(), 3);
}

#[test]
fn weights_report() {
    let dir = tempfile::tempdir().unwrap();
    let a = path(dir.path(), "a.json");
    ok(&["build", "2", "--out", s(&a)]);
    let v: Value = serde_json::from_str(&ok(&["weights", s(&a)])).unwrap();
    assert_eq!(v["weights_equal_degrees"], true);
    assert!(v["shifts"].as_array().unwrap().iter().all(|p| p[1] == "0"));
    let shifted: Value = serde_json::from_str(&ok(&["weights", s(&a), "--structures", "0,3"])).unwrap();
    assert_eq!(shifted["weights_equal_degrees"], false);
    assert!(ok(&["weights", s(&a), "--format", "table"]).contains("weight 4"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let f2 = path(dir.path(), "f2.json");
    ok(&["build", "2", "--field", "Fp:2", "--out", s(&f2)]);
    assert_eq!(code(&["formalize", s(&f2)]), 5);

    let ext = path(dir.path(), "ext.json");
    write_json(&ext, &exterior_json());
    ok(&["formalize", s(&ext), "--field-source", "euler"]);
    let twice = path(dir.path(), "2e.json");
    write_json(
        &twice,
        &json!({"field": "Q", "total_degree": 1, "components": [{"arity": 1, "entries": [
            {"inputs": ["x"], "output": [["x", "2"]]},
            {"inputs": ["y"], "output": [["y", "2"]]},
            {"inputs": ["xy"], "output": [["xy", "4"]]}
        ]}]}),
    );
    assert_eq!(code(&["formalize", s(&ext), "--field-source", "file", "--field-file", s(&twice)]), 4);

    let nonmin = path(dir.path(), "nonmin.json");
    write_json(
        &nonmin,
        &json!({
            "field": "Q",
            "basis": [{"label": "a", "degree": 0}, {"label": "b", "degree": 1}],
            "products": [{"arity": 1, "entries": [{"inputs": ["a"], "output": [["b", "1"]]}]}],
            "max_arity": 4
        }),
    );
    assert_eq!(code(&["formalize", s(&nonmin)]), 3);

    let a = path(dir.path(), "a.json");
    ok(&["build", "2", "--out", s(&a)]);
    assert_eq!(code(&["weights", s(&a), "--field-source", "file", "--field-file", s(&twice)]), 2, "labels of another space");
    let arc: Value = serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    let doubled: Vec<Value> = arc["basis"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|b| b["degree"] != 0)
        .map(|b| json!({"inputs": [b["label"]], "output": [[b["label"], (2 * b["degree"].as_i64().unwrap()).to_string()]]}))
        .collect();
    let arc_twice = path(dir.path(), "arc2e.json");
    write_json(&arc_twice, &json!({"field": "Q", "total_degree": 1, "components": [{"arity": 1, "entries": doubled}]}));
    assert_eq!(code(&["weights", s(&a), "--field-source", "file", "--field-file", s(&arc_twice)]), 7);
    let zero: Value = serde_json::from_str(&ok(&[
        "weights", s(&a), "--field-source", "file", "--field-file", s(&arc_twice), "--structures", "zero",
    ]))
    .unwrap();
    assert_eq!(zero["weights_equal_degrees"], false);
    assert_eq!(code(&["formalize", s(&path(dir.path(), "missing.json"))]), 2);
    let mut broken: Value = serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    let units = broken["strict_units"].as_array().unwrap().clone();
    let entries = broken["products"][0]["entries"].as_array_mut().unwrap();
    let e = entries.iter_mut().find(|e| e["inputs"].as_array().unwrap().iter().all(|l| !units.contains(l))).unwrap();
    e["output"][0][1] = json!("7");
    write_json(&a, &broken);
    assert_eq!(code(&["formalize", s(&a)]), 9);
}
