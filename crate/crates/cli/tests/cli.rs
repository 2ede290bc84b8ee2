use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use isoform::paper::find;
use serde_json::Value;
use tempfile::TempDir;

fn isoform(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isoform")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn form_file(dir: &Path, name: &str) -> PathBuf {
    let path = dir.join(format!("{name}.json"));
    std::fs::write(&path, find(name).unwrap().json).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn isotropy_of_bundled_forms() {
    let dir = TempDir::new().unwrap();
    let v = stdout_json(&isoform(&["isotropy", "--form", s(&form_file(dir.path(), "octa"))]));
    assert_eq!(v["kind"], "finite");
    assert_eq!(v["group_type"], "S4");
    assert_eq!(v["order"], 24);
    assert_eq!((v["l1"].as_u64(), v["l2"].as_u64()), (Some(0), Some(0)));
    assert!(!v["generators"].as_array().unwrap().is_empty());

    let v = stdout_json(&isoform(&["isotropy", "--form", s(&form_file(dir.path(), "diedricoN"))]));
    assert_eq!((v["group_type"].as_str(), v["n"].as_u64()), (Some("dihedral"), Some(5)));
}

#[test]
fn two_pole_form_is_continuous() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("two_pole.json");
    std::fs::write(&path, r#"{"lambda": [0, 1], "zeros": [], "poles": [[0, 0], "inf"]}"#).unwrap();
    let v = stdout_json(&isoform(&["isotropy", "--form", s(&path)]));
    assert_eq!(v["kind"], "continuous_cstar");
}

#[test]
fn out_flag_writes_a_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("iso.json");
    let o = isoform(&["isotropy", "--form", s(&form_file(dir.path(), "tetra")), "--out", s(&out)]);
    assert!(o.status.success() && o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["group_type"], "A4");
}

#[test]
fn check_reports_conditions() {
    let dir = TempDir::new().unwrap();
    let e3 = form_file(dir.path(), "ejemplo3");
    let v = stdout_json(&isoform(&["check", "--form", s(&e3), "--group", "Z3"]));
    assert_eq!(v["all"], true);
    let v = stdout_json(&isoform(&["check", "--form", s(&e3), "--group", "D3"]));
    assert_eq!(v["all"], false);
    let v = stdout_json(&isoform(&["check", "--form", s(&form_file(dir.path(), "dodecaedro")), "--group", "A5"]));
    assert_eq!(v["a5_shortcut"], v["cond1"].as_bool().unwrap() && v["cond2"].as_bool().unwrap());
}

#[test]
fn synth_and_sample() {
    let o = isoform(&["synth", "--group", "D5", "--dif", "0", "--l2", "0", "--lambda", "0,-1"]);
    let v = stdout_json(&o);
    assert_eq!(v["poles"].as_array().unwrap().len(), 7);
    assert_eq!(v["zeros"].as_array().unwrap().len(), 5);

    let o = isoform(&["synth", "--group", "Z2", "--l1", "1", "--l2", "1", "--zeros", "0.5,0.25", "--poles", "1.3,-0.4"]);
    assert_eq!(stdout_json(&o)["poles"].as_array().unwrap().len(), 4);

    let a = isoform(&["sample", "--group", "A4", "--l1", "0", "--l2", "0", "--seed", "1"]);
    let b = isoform(&["sample", "--group", "A4", "--l1", "0", "--l2", "0", "--seed", "1"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout_json(&a)["poles"].as_array().unwrap().len(), 8);
}

#[test]
fn isochrony_output() {
    let dir = TempDir::new().unwrap();
    let v = stdout_json(&isoform(&["isochrony", "--form", s(&form_file(dir.path(), "contraejemploisocrona"))]));
    assert_eq!(v["is_isochronous"], true);
    assert_eq!(v["mirror_found"], false);
    let v = stdout_json(&isoform(&["isochrony", "--form", s(&form_file(dir.path(), "octa"))]));
    assert_eq!(v["mirror_found"], true);
    assert_eq!(v["mirror_circle"].as_array().unwrap().len(), 3);
}

#[test]
fn render_writes_svg_and_samples() {
    let dir = TempDir::new().unwrap();
    let svg = dir.path().join("p.svg");
    let samples = dir.path().join("s.json");
    let form = form_file(dir.path(), "tetra");
    let args = ["render", "--form", s(&form), "--window", "-2,2,-2,2", "--grid", "3", "--out", s(&svg), "--json", s(&samples), "--samples", "5"];
    assert!(isoform(&args).status.success());
    let first = std::fs::read_to_string(&svg).unwrap();
    assert!(first.contains("<svg") && first.contains("class=\"pole\""));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&samples).unwrap()).unwrap();
    assert!(v.as_array().unwrap().len() <= 25);
    assert!(isoform(&args).status.success());
    assert_eq!(first, std::fs::read_to_string(&svg).unwrap());
}

#[test]
fn exit_codes() {
    let o = isoform(&["synth", "--group", "Z3", "--l1", "0", "--l2", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("illegal table cell"));

    let o = isoform(&["isotropy", "--form", "/nonexistent/form.json"]);
    assert_eq!(o.status.code(), Some(2));

    let o = isoform(&["isotropy", "--form", "x.json", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));

    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"numer": [[1, 0]], "denom": [[1, 0], [2, 0], [1, 0]]}"#).unwrap();
    let o = isoform(&["isotropy", "--form", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("non-simple root"));

    let o = isoform(&["--eps", "0.5", "sample", "--group", "A4", "--l1", "0", "--l2", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_paper_passes() {
    let o = isoform(&["verify-paper"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("0 failed"));
    let o = isoform(&["verify-paper", "--json"]);
    let rows = stdout_json(&o);
    assert_eq!(rows.as_array().unwrap().len(), 24);
}
