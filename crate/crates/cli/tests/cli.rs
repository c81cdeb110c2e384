use std::process::{Command, Output};

use serde_json::Value;

fn rinv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rinv")).args(args).env_remove("RINV_OUT_DIR").output().expect("run rinv")
}

fn lines(o: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&o.stdout).lines().map(|l| serde_json::from_str(l).expect("json line")).collect()
}

#[test]
fn susy_table_matches() {
    let o = rinv(&["tables", "--algebra", "susy", "--reference", "paper"]);
    assert_eq!(o.status.code(), Some(0));
    let v = lines(&o);
    assert_eq!(v[0]["id"], "susy");
    assert_eq!(v[0]["detail"]["matched"], 64);
    assert_eq!(v.last().unwrap()["summary"], true);
}

#[test]
fn single_solution() {
    let o = rinv(&["solutions", "--id", "as4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(lines(&o)[0]["status"], "pass");
}

#[test]
fn printed_conservation_fails() {
    let o = rinv(&["conservation", "--kmax", "2", "--convention", "paper"]);
    assert_eq!(o.status.code(), Some(1));
    let v = lines(&o);
    for (i, k) in ["paper-printed-k1", "paper-printed-k2"].iter().enumerate() {
        assert_eq!(v[i]["id"], *k);
        assert_eq!(v[i]["status"], "fail");
        assert!(v[i]["witness"].as_str().unwrap().contains("R_x"));
    }
}

#[test]
fn corrected_conservation_passes() {
    assert_eq!(rinv(&["conservation", "--kmax", "4"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(rinv(&["bogus"]).status.code(), Some(2));
    assert_eq!(rinv(&["solutions", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(rinv(&["solutions", "--id", "nope"]).status.code(), Some(2));
    assert_eq!(rinv(&["conservation", "--convention", "sideways"]).status.code(), Some(2));
    assert_eq!(rinv(&["hydro", "grid", "--x", "1:0:5"]).status.code(), Some(2));
}

#[test]
fn erratum_does_not_fail_the_run() {
    let o = rinv(&["solutions", "--id", "as3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = lines(&o);
    assert_eq!(v[0]["status"], "erratum");
    assert_eq!(v[1]["counts"]["erratum"], 1);
}

#[test]
fn catalog_json_round_trip() {
    let o = rinv(&["catalog", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let c = rinv::catalog::Catalog::from_json(&text).unwrap();
    assert_eq!(c.count(rinv::liealg::Algebra::Classical), 13);
    assert_eq!(c.count(rinv::liealg::Algebra::Susy), 28);
    assert_eq!(c.to_json().unwrap(), text);
}

#[test]
fn catalog_markdown_has_tables() {
    let o = rinv(&["catalog", "markdown"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("## susy subalgebras"));
    assert!(text.contains("| SL14 |"));
}

#[test]
fn hydro_invert_and_grid_csv() {
    let o = rinv(&["hydro", "invert", "--x", "2.5", "--t", "3", "--guess", "2.1,0.9"]);
    let v = lines(&o);
    assert!((v[0]["detail"]["r"].as_f64().unwrap() - 2.0).abs() < 1e-10);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.csv");
    let o = rinv(&["hydro", "grid", "--x", "20:21:4", "--t", "2.8:3.2:4", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(out).unwrap();
    assert_eq!(csv.lines().count(), 17);
    assert!(csv.starts_with("x,t,R,S,det,residual_R,residual_S,status"));
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_rinv"))
        .args(["solutions", "--id", "as4"])
        .env("RINV_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("solutions.jsonl")).unwrap();
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn weierstrass_with_path_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("path.json");
    std::fs::write(&p, r#"{"vertices": [[0.5, 1.0], [1.0, 1.5], [1.5, 2.0]]}"#).unwrap();
    let o = rinv(&["weierstrass", "--k", "1", "--path", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = lines(&o);
    // χ = x²/t on R = S = x/t
    let chi = v[0]["detail"]["chi"][0].as_f64().unwrap();
    assert!((chi - (1.125 - 0.25)).abs() < 1e-7);
}

#[test]
fn seed_is_recorded() {
    let v = lines(&rinv(&["solutions", "--id", "as3-fixed", "--seed", "7"]));
    assert_eq!(v[0]["status"], "pass");
    assert_eq!(v[1]["seed"], 7);
}
