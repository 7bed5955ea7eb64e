use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn btlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_btlab")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

/// Runs a command that must succeed and returns its document.
fn ok(args: &[&str]) -> Value {
    let out = btlab(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    let v = json_of(&out);
    assert_eq!(v["schema"], "btlab/1");
    v
}

/// Runs a command with `--out` and returns the written document.
fn ok_to(args: &[&str], file: &Path) -> Value {
    let out = btlab(&[args, &["--out", path_str(file)]].concat());
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    assert!(out.stdout.is_empty());
    serde_json::from_str(&fs::read_to_string(file).unwrap()).unwrap()
}

fn fails(args: &[&str]) -> (i32, Value) {
    let out = btlab(args);
    let v = json_of(&out);
    assert_eq!(v["schema"], "btlab/1");
    assert!(v["error"]["kind"].is_string() && v["error"]["message"].is_string());
    (out.status.code().unwrap(), v)
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn vertex_lies_in_x_e() {
    let v = ok(&["criterion", "--tower", "e=1,f=2", "--n", "4", "--chain", "standard-vertex"]);
    assert_eq!(v["in_XE"], true);
    assert_eq!(v["d"], serde_json::json!([4]));
}

#[test]
fn chamber_of_gl4_is_not_in_x_e() {
    let v = ok(&["tower", "criterion", "--tower", "gl4-quadratic-unramified", "--chain", "standard-chamber"]);
    assert_eq!(v["in_XE"], false);
    let v = ok(&["tower", "criterion", "--tower", "gl4-quadratic-unramified", "--chain", "standard:2,2"]);
    assert_eq!(v["in_XE"], true);
}

#[test]
fn single_chamber_is_acyclic() {
    let v = ok(&["complex", "homology", "--region", "single-chamber", "--coeff", "const:1"]);
    assert_eq!(v["ranks"], serde_json::json!([1, 0]));
    assert_eq!(v["chi"], 1);
}

#[test]
fn companion_of_x2_minus_t_fixes_one_simplex() {
    let v = ok(&["lefschetz", "fixed", "--gamma", "companion:x^2-t", "--radius", "2", "--q", "2"]);
    assert_eq!(v["count"], 1);
    assert_eq!(v["fixed"].as_array().unwrap().len(), 1);
    assert_eq!(v["fixed"][0]["orbit_key"], serde_json::json!([1, 1]));
    let alias = ok(&["fixed", "--gamma", "x2-minus-t", "--radius", "2", "--q", "2"]);
    assert_eq!(alias, v);
}

#[test]
fn tower_field_data() {
    let v = ok(&["field", "--q", "4", "--tower", "e=2,f=1;e=1,f=3", "--n", "6"]);
    assert_eq!((v["p"].as_u64(), v["k"].as_u64()), (Some(2), Some(2)));
    let orders: Vec<u64> =
        v["floors"].as_array().unwrap().iter().map(|f| f["residue_order"].as_u64().unwrap()).collect();
    assert_eq!(orders, [4, 4, 64]);
}

#[test]
fn decomposition_preset_gives_two_chambers() {
    let v = ok(&["decompose", "--tower", "chamber-decomp-n4-f2"]);
    let ch = v["chambers"].as_array().unwrap();
    assert_eq!(ch.len(), 2);
    assert!(ch.iter().all(|c| c["support_XL"] == true));
}

#[test]
fn iwahori_volume_relative_to_maximal() {
    let v = ok(&["volume", "--q", "2", "--chain", "standard-chamber", "--relative-to", "standard-vertex"]);
    assert_eq!(v["ratio"], "1/3");
}

#[test]
fn minimal_term_follows_divisibility() {
    let args = |l: &str| ok(&["lefschetz", "minimal", "--gamma", "x2-minus-t", "--L", l, "--coeff", "const:2"]);
    assert_eq!(args("e=2,f=1")["value"], "2");
    let off = args("e=1,f=2");
    assert_eq!((off["support"].as_bool(), off["value"].as_str()), (Some(false), Some("0")));
}

#[test]
fn random_chain_round_trips_through_invariants() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("chain.json");
    let doc = ok_to(&["chain", "random", "--n", "4", "--d", "1,2,1", "--q", "3", "--seed", "11"], &file);
    assert_eq!(doc["q"], 3);
    let v = ok(&["building", "invariants", "--chain", path_str(&file)]);
    assert_eq!(v["e"], 3);
    assert_eq!(v["p"], 3);
}

#[test]
fn region_round_trips_through_homology() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("ball.json");
    let region = ok_to(&["building", "region", "--radius", "1", "--n", "3"], &file);
    let from_file = ok(&["complex", "homology", "--region", path_str(&file), "--n", "3"]);
    let direct = ok(&["complex", "homology", "--region", "ball:1", "--n", "3"]);
    assert_eq!(from_file, direct);
    assert_eq!(direct["ranks"][0], 1);
    // Re-emitting the loaded region reproduces the file.
    let again = ok(&["building", "region", "--region", path_str(&file), "--n", "3"]);
    assert_eq!(again, region);
}

#[test]
fn labelled_and_oriented_homology_agree() {
    let a = ok(&["complex", "homology", "--radius", "1", "--n", "3", "--style", "oriented", "--coeff", "const:2"]);
    let b = ok(&["complex", "homology", "--radius", "1", "--n", "3", "--style", "labelled", "--coeff", "const:2"]);
    assert_eq!(a, b);
}

#[test]
fn output_is_deterministic() {
    let args = ["chain", "random", "--n", "3", "--q", "2", "--seed", "5", "--jobs", "1"];
    let one = btlab(&args).stdout;
    let many = btlab(&["chain", "random", "--n", "3", "--q", "2", "--seed", "5", "--jobs", "4"]).stdout;
    assert_eq!(one, many);
    let other = btlab(&["chain", "random", "--n", "3", "--q", "2", "--seed", "6"]).stdout;
    assert_ne!(one, other);
    let h1 = btlab(&["complex", "homology", "--radius", "2", "--n", "2", "--jobs", "1"]).stdout;
    let h4 = btlab(&["complex", "homology", "--radius", "2", "--n", "2", "--jobs", "4"]).stdout;
    assert_eq!(h1, h4);
}

#[test]
fn domain_errors_exit_with_two() {
    let (code, v) = fails(&["criterion", "--tower", "e=1,f=3", "--n", "4"]);
    assert_eq!((code, v["error"]["kind"].as_str()), (2, Some("DimensionMismatch")));
    let (code, _) = fails(&["criterion", "--tower", "e=1,f=2"]);
    assert_eq!(code, 2);
    let (code, v) = fails(&["field", "--q", "6"]);
    assert_eq!(code, 2, "{v}");
    let (code, _) = fails(&["fixed", "--gamma", "/no/such/file.json"]);
    assert_eq!(code, 2);
}

#[test]
fn guard_violations_exit_with_three() {
    let (code, v) = fails(&["orbit", "--vertex", "vertex:4,0", "--prec", "3", "--guard", "3"]);
    assert_eq!((code, v["error"]["kind"].as_str()), (3, Some("GuardExceeded")));
}

#[test]
fn guards_must_be_positive() {
    for args in [
        &["orbit", "--vertex", "vertex:0,0", "--guard", "0"][..],
        &["fixed", "--gamma", "x2-minus-t", "--radius", "0"],
        &["complex", "homology", "--radius", "0"],
        &["chain", "random", "--jobs", "0"],
    ] {
        assert_eq!(fails(args).0, 2, "{args:?}");
    }
}

#[test]
fn unknown_fields_and_flags_are_rejected() {
    let dir = TempDir::new().unwrap();
    let chain = dir.path().join("chain.json");
    let mut doc = ok_to(&["chain", "random", "--seed", "1"], &chain);
    doc["note"] = "extra".into();
    fs::write(&chain, doc.to_string()).unwrap();
    let (code, v) = fails(&["building", "invariants", "--chain", path_str(&chain)]);
    assert_eq!((code, v["error"]["kind"].as_str()), (2, Some("Parse")));

    let tower = dir.path().join("tower.json");
    fs::write(&tower, r#"{"schema":"btlab/1","floors":[{"e":1,"f":2}],"colour":"red"}"#).unwrap();
    assert_eq!(fails(&["criterion", "--tower", path_str(&tower), "--n", "4"]).0, 2);

    let wrong_schema = dir.path().join("region.json");
    fs::write(&wrong_schema, r#"{"schema":"btlab/0","simplices":[]}"#).unwrap();
    assert_eq!(fails(&["complex", "homology", "--region", path_str(&wrong_schema)]).0, 2);

    assert_eq!(fails(&["criterion", "--tower", "e=1,f=2", "--n", "4", "--bogus"]).0, 2);
}

#[test]
fn failed_runs_leave_no_output_file() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("out.json");
    let (code, _) = fails(&["criterion", "--tower", "e=1,f=3", "--n", "4", "--out", path_str(&file)]);
    assert_eq!(code, 2);
    assert!(!file.exists());
}
