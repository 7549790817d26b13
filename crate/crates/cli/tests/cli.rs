use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn trivector(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trivector"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|_| panic!("{}", String::from_utf8_lossy(&out.stderr)))
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn gamma_build_writes_nine_terms() {
    let dir = tempfile::tempdir().unwrap();
    let out = trivector(&["gamma", "build", "--field", "GF(2)", "--set", "c15=1", "-o", "g.json"], dir.path());
    assert!(out.status.success());
    assert_eq!(report(&out)["verdict"]["terms"], 9);
    let g = read(&dir.path().join("g.json"));
    assert_eq!(g["terms"].as_array().unwrap().len(), 9);
    assert_eq!(g["field"], "GF(2)");
}

#[test]
fn default_modulus_and_rationals() {
    let dir = tempfile::tempdir().unwrap();
    let out = trivector(&["gamma", "build", "--field", "GF(4)"], dir.path());
    assert!(out.status.success());
    let r = report(&out);
    assert_eq!(r["verdict"]["terms"], 8);
    assert!(r["verdict"]["gamma"]["field"].as_str().unwrap().starts_with("GF(2^2"));
    let out = trivector(&["gamma", "build", "--field", "Q", "--set", "c30=-1/2"], dir.path());
    assert_eq!(report(&out)["verdict"]["terms"], 9);
}

#[test]
fn chern_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = trivector(&["flags", "chern"], dir.path());
    assert!(out.status.success());
    let r = report(&out);
    assert_eq!(r["command"], "flags chern");
    assert_eq!(r["verdict"]["coefficient"], 81);
    assert_eq!(r["seed"], 0);
    assert!(r.get("elapsed_ms").is_none());
    let timed = report(&trivector(&["--timing", "flags", "chern"], dir.path()));
    assert!(timed["elapsed_ms"].is_u64());
}

#[test]
fn pipeline_over_gf2() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    trivector(&["gamma", "build", "--field", "GF(2)", "--set", "c15=1", "-o", "g.json"], p);

    let out = trivector(&["loci", "count", "--gamma", "g.json", "--max-rank", "4"], p);
    let r = report(&out);
    assert_eq!(r["verdict"]["at_most"]["count"], 5);
    assert_eq!(r["verdict"]["counts"]["2"], 0);
    assert_eq!(r["inputs"]["g.json"].as_str().unwrap().len(), 64);

    let r = report(&trivector(&["stability", "--gamma", "g.json"], p));
    assert_eq!(r["verdict"]["status"], "stable");

    let r = report(&trivector(&["loci", "count", "--gamma", "g.json", "--q", "4"], p));
    assert_eq!(r["verdict"]["field"], "GF(2^2;mod=1,1,1)");

    std::fs::write(p.join("c.json"), r#"{"field": "GF(2)", "c": {"15": "1"}}"#).unwrap();
    let r = report(&trivector(&["loci", "check-embedding", "--curve", "c.json"], p));
    assert_eq!(r["verdict"]["passed"], true);

    let out = trivector(&["flags", "search", "--gamma", "g.json", "--max-ext", "1"], p);
    assert!(out.status.success());
    let r = report(&out);
    assert!(r["verdict"]["weighted_count"].as_u64().unwrap() <= 81);
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    trivector(&["gamma", "build", "--field", "GF(4)", "--set", "c15=1", "--set", "c24=1,1", "-o", "g.json"], p);
    let w = trivector(&["--seed", "3", "loci", "count", "--gamma", "g.json"], p);
    let v = trivector(&["--seed", "3", "--threads", "1", "loci", "count", "--gamma", "g.json"], p);
    assert!(w.status.success());
    assert_eq!(w.stdout, v.stdout);
}

#[test]
fn char3_commands() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    std::fs::write(p.join("c.json"), r#"{"field": "GF(3)", "c": {"12": "1", "24": "1", "30": "2"}}"#).unwrap();
    let out = trivector(&["char3", "rank", "--curve", "c.json"], p);
    if out.status.success() {
        let r = report(&out);
        assert_eq!(r["verdict"]["lie"], r["verdict"]["coeff"]);
    } else {
        // singular curves are input errors
        assert_eq!(out.status.code(), Some(1));
    }
    std::fs::write(p.join("c2.json"), r#"{"field": "GF(2)", "c": {"15": "1"}}"#).unwrap();
    assert_eq!(trivector(&["char3", "rank", "--curve", "c2.json"], p).status.code(), Some(1));

    trivector(&["gamma", "build", "--field", "GF(3)", "--set", "c24=1", "-o", "g.json"], p);
    let r = report(&trivector(&["char3", "power", "--gamma", "g.json", "--exp", "27"], p));
    assert_eq!(r["verdict"]["matrix"]["rows"].as_array().unwrap().len(), 9);
    let bad = trivector(&["char3", "power", "--gamma", "g.json", "--exp", "5"], p);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn malformed_json_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    std::fs::write(p.join("bad.json"), "{\"field\": \"GF(2)\",\n  \"terms\": [,]}").unwrap();
    let out = trivector(&["stability", "--gamma", "bad.json"], p);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn flag_check_and_invariants() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    trivector(&["gamma", "build", "--field", "GF(5)", "--set", "c15=1", "-o", "g.json"], p);
    let unit = |i: usize| -> Vec<String> { (0..9).map(|j| if i == j { "1" } else { "0" }.to_string()).collect() };
    let span = |n: usize| -> Vec<Vec<String>> { (0..n).map(unit).collect() };
    let flag = serde_json::json!({"field": "GF(5)", "F1": span(1), "F3": span(3), "F6": span(6), "F8": span(8)});
    std::fs::write(p.join("f.json"), flag.to_string()).unwrap();
    let r = report(&trivector(&["flags", "check", "--gamma", "g.json", "--flag", "f.json"], p));
    assert_eq!(r["verdict"]["compatible"], false);
    assert!(!r["verdict"]["violated"].as_array().unwrap().is_empty());
    let r = report(&trivector(&["heisenberg", "invariants", "--field", "GF(7)"], p));
    assert_eq!(r["verdict"]["dimension"], 4);
}

#[test]
fn selftest_subset() {
    let dir = tempfile::tempdir().unwrap();
    let out = trivector(&["selftest", "--only", "9,10,12"], dir.path());
    assert!(out.status.success());
    let r = report(&out);
    assert_eq!(r["verdict"]["passed"], true);
    assert_eq!(r["verdict"]["criteria"].as_array().unwrap().len(), 3);
}
