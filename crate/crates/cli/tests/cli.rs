use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_g3iso"))
}

fn scene() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenes/examples.json")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn malformed_inline_curve_is_a_usage_error() {
    let out = run(&["frenet", "--curve", "s^3/6;s^2/2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("f,g"));
}

#[test]
fn bad_flags_and_expressions_exit_with_two() {
    assert_eq!(run(&["frenet"]).status.code(), Some(2));
    assert_eq!(run(&["frenet", "--curve", "s^2,sin(s"]).status.code(), Some(2));
    assert_eq!(run(&["isophote", "--surface", "u1,u2,0", "--axis", "0,0,1", "--grid", "9"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--filter", "no-such-check"]).status.code(), Some(2));
    let out = bin().args(["verify", "--filter", "thm31"]).env("G3_THREADS", "many").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_with_one() {
    // a straight curve has no Frenet frame
    assert_eq!(run(&["frenet", "--curve", "2*s,s"]).status.code(), Some(1));
    // k_n/k_g = 1/(2a + 1) is 7/9 on this trace, not tan(pi/4)
    let out = run(&["axis", "--case", "isotropic", "--surface", "u1,u2,u2+u1^2/2", "--trace", "s,s^2/7", "--angle", "pi/4"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn every_subcommand_reports_a_schema_version() {
    let s = scene();
    let s = s.to_str().unwrap();
    let docs = [
        json(&["--scene", s, "frenet", "--curve", "cubic", "--samples", "5", "--json"]),
        json(&["--scene", s, "darboux", "--surface", "cylinder", "--trace", "helix", "--samples", "5", "--json"]),
        json(&["--scene", s, "classify", "--surface", "plane", "--trace", "line", "--json"]),
        json(&["--scene", s, "axis", "--case", "nonisotropic", "--surface", "circles", "--trace", "circle", "--angle", "-1", "--json"]),
        json(&["--scene", s, "isophote", "--query", "cylinder-pi3", "--json"]),
        json(&["--scene", s, "revolve", "--profile", "bowl", "--mesh", "4x4", "--json"]),
        json(&["verify", "--filter", "frenet-oracle", "--json"]),
    ];
    for d in &docs {
        assert_eq!(d["schema_version"], 1, "{d}");
    }
    // defaults are echoed
    assert_eq!(docs[4]["settings"]["grid"], serde_json::json!([256, 256]));
    assert_eq!(docs[4]["settings"]["refine_tol"], 1e-9);
    assert_eq!(docs[3]["result"]["d"], serde_json::json!([1.0, 0.0, 0.0]));
    assert_eq!(docs[5]["result"]["mesh"]["faces"], 32);
}

#[test]
fn inline_expressions_work_without_a_scene() {
    let d = json(&["frenet", "--curve", "s^2/2,s^3/6", "--domain", "0,2", "--samples", "3", "--json"]);
    let last = &d["result"][2];
    assert!((last["kappa"].as_f64().unwrap() - 5f64.sqrt()).abs() <= 1e-12);
    assert!((last["tau"].as_f64().unwrap() - 0.2).abs() <= 1e-12);

    let d = json(&[
        "isophote", "--surface", "u1,sin(u2),cos(u2)", "--udomain", "0,1,0,2*pi", "--axis", "0,0,2", "--beta", "pi/3",
        "--grid", "32x32", "--json",
    ]);
    assert_eq!(d["result"]["polylines"].as_array().unwrap().len(), 2);
}

#[test]
fn isophote_writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let (obj, svg, csv) = (dir.path().join("iso.obj"), dir.path().join("iso.svg"), dir.path().join("iso.csv"));
    let out = bin()
        .arg("--scene")
        .arg(scene())
        .args(["isophote", "--query", "cylinder-pi3", "--obj"])
        .arg(&obj)
        .arg("--svg")
        .arg(&svg)
        .arg("--csv")
        .arg(&csv)
        .output()
        .unwrap();
    assert!(out.status.success());
    let svg = std::fs::read_to_string(svg).unwrap();
    assert_eq!(svg.matches("<polyline ").count(), 2);
    assert!(std::fs::read_to_string(obj).unwrap().lines().filter(|l| l.starts_with("l ")).count() == 2);
    assert!(std::fs::read_to_string(csv).unwrap().starts_with("polyline,"));
}

#[test]
fn verify_report_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for (k, threads) in ["1", "0"].iter().enumerate() {
        let path = dir.path().join(format!("r{k}.json"));
        let out = bin().args(["verify", "--json"]).arg(&path).env("G3_THREADS", threads).output().unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
        reports.push(std::fs::read(path).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    let v: Value = serde_json::from_slice(&reports[0]).unwrap();
    assert_eq!(v["failed"], 0);
}

#[test]
fn verify_prop43_reports_the_constant() {
    let d = json(&["verify", "--filter", "prop43", "--json"]);
    let m = &d["checks"][0]["measurements"];
    assert_eq!(m["c1-A0-dz.expected"].as_f64().unwrap(), std::f64::consts::FRAC_1_SQRT_2);
    assert!((m["c1-A0-dz.value"].as_f64().unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() <= 1e-12);
    assert!(m["c1-A0-dz.spread"].as_f64().unwrap() <= 1e-12);
}
