use std::fs;
use std::path::Path;
use std::process::Command;

use delannoy_cli::{run, EXIT_CAP, EXIT_FALSIFIED, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("delannoy").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = call(args);
    assert_eq!(code, EXIT_OK, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

fn with_cache<'a>(cache: &'a Path, args: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec!["--cache", cache.to_str().unwrap()];
    v.extend_from_slice(args);
    v
}

/// Multiplicities as `label → count`.
fn parts(v: &Value) -> Vec<(String, u64)> {
    v["parts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p["label"].as_str().unwrap().to_string(), p["multiplicity"].as_u64().unwrap()))
        .collect()
}

#[test]
fn homdim_matches_the_recurrence() {
    let mut d = [[1u64; 6]; 6];
    for n in 1..6 {
        for m in 1..6 {
            d[n][m] = d[n - 1][m] + d[n][m - 1] + d[n - 1][m - 1];
        }
    }
    for n in 0..6 {
        for m in 0..6 {
            let v = json(&["homdim", "--n", &n.to_string(), "--m", &m.to_string()]);
            assert_eq!(v["hom_dim"].as_u64(), Some(d[n][m]));
        }
    }
    let (code, out, _) = call(&["--format", "table", "homdim", "--n", "2", "--m", "2"]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "13\n"));
}

#[test]
fn decompose_the_plane() {
    let v = json(&["decompose", "--object", "C(R^2)"]);
    let want = [("∅", 1), ("a", 2), ("b", 2), ("aa", 1), ("ab", 1), ("ba", 1), ("bb", 1)];
    assert_eq!(parts(&v), want.map(|(l, k)| (l.to_string(), k)).to_vec());
    assert_eq!(v["end_dim"], 13);
    let v = json(&["decompose", "--object", "C(R)"]);
    assert_eq!(parts(&v), vec![("∅".into(), 1), ("a".into(), 1), ("b".into(), 1)]);
    let v = json(&["decompose", "--label", "ab"]);
    assert_eq!(parts(&v), vec![("ab".into(), 1)]);
    assert_eq!(v["dim"], "1");
    let v = json(&["decompose", "--object", "C(R^1⊠R^1)"]);
    assert_eq!(parts(&v).len(), 9);
}

#[test]
fn the_sub_etale_example_is_reported_with_a_witness() {
    let v = json(&["etale-check", "--builtin", "subetale"]);
    assert_eq!(v["etale"], false);
    assert_eq!(v["unit_trace"], "0");
    assert!(v["witness"]["support"].as_array().is_some_and(|s| !s.is_empty()));
    assert_eq!(v["invariants_dim"], 1);
    let v = json(&["etale-check", "--builtin", "schwartz:3"]);
    assert_eq!((v["etale"].clone(), v["unit_trace"].clone()), (Value::Bool(true), Value::from("-1")));
}

#[test]
fn restriction_tensor_and_ideals() {
    let v = json(&["restrict", "--label", "ab"]);
    assert_eq!(v["holds"], true);
    assert_eq!(v["observed"], v["expected"]);
    assert_eq!(v["observed"].as_array().unwrap().len(), 5);
    let v = json(&["tensor", "--left", "a", "--right", "a"]);
    assert_eq!(parts(&v), vec![("a".into(), 1), ("aa".into(), 2)]);
    let v = json(&["resideals", "--n", "2"]);
    assert_eq!(v["case_a"], true);
    assert_eq!(v["right_orbits"], serde_json::json!([4]));
}

#[test]
fn e_idempotents_and_subalgebras() {
    let v = json(&["eidem", "--n", "3"]);
    assert_eq!((v["count"].clone(), v["bijective"].clone()), (Value::from(8), Value::Bool(true)));
    let v = json(&["subalgebras", "--n", "2"]);
    let kept: Vec<Value> = v["subalgebras"].as_array().unwrap().iter().map(|s| s["kept_coordinates"].clone()).collect();
    assert_eq!(kept, serde_json::from_str::<Vec<Value>>("[[0,1],[1],[0],[]]").unwrap());
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["decompose", "--label", "abc"]).0, EXIT_USAGE);
    assert_eq!(call(&["decompose"]).0, EXIT_USAGE);
    assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(call(&["etale-check", "--builtin", "nothing"]).0, EXIT_USAGE);
    assert_eq!(call(&["decompose", "--object", "R^2"]).0, EXIT_USAGE);
    assert_eq!(call(&["eidem", "--n", "6"]).0, EXIT_CAP);
    assert_eq!(call(&["homdim", "--n", "100", "--m", "1"]).0, EXIT_CAP);
    assert_eq!(call(&["--help"]).0, EXIT_OK);
    assert_ne!(EXIT_FALSIFIED, EXIT_OK);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["decompose", "--object", "C(R^3)"][..],
        &["--format", "table", "eidem", "--n", "2"],
        &["etale-check", "--builtin", "subetale"],
    ] {
        assert_eq!(call(args).1, call(args).1);
    }
}

#[test]
fn the_registry_cache_round_trips_and_checks_its_version() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("registry.json");
    let v = json(&with_cache(&path, &["registry", "--build", "2"]));
    assert_eq!(v["simples"].as_array().unwrap().len(), 7);
    let stored: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(stored["depth"], 2);
    assert_eq!(stored["simples"]["a"]["coeffs"], serde_json::json!(["0", "1", "1"]));
    let first = call(&with_cache(&path, &["decompose", "--object", "C(R^2)"]));
    assert_eq!(first.1, call(&["decompose", "--object", "C(R^2)"]).1);

    let mut stale = stored.clone();
    stale["amalgam_order_version"] = Value::from(999);
    fs::write(&path, stale.to_string()).unwrap();
    let (code, _, err) = call(&with_cache(&path, &["decompose", "--object", "C(R^2)"]));
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("version 999"), "{err}");
    // rebuilding replaces the stale file
    json(&with_cache(&path, &["registry", "--build", "1"]));
    let fresh: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_ne!(fresh["amalgam_order_version"], 999);
}

#[test]
fn the_binary_reads_the_cache_path_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested").join("cache.json");
    let out = Command::new(env!("CARGO_BIN_EXE_delannoy"))
        .args(["tensor", "--left", "a", "--right", "b"])
        .env(delannoy_cli::cache::CACHE_ENV, &path)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(path.exists());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(parts(&v).len(), 5);
    let bad = Command::new(env!("CARGO_BIN_EXE_delannoy")).args(["homdim", "--n", "x"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
}

#[test]
fn verify_suites() {
    let v = json(&["verify", "--suite", "all", "--max-n", "0"]);
    assert_eq!(v["pass"], true);
    let v = json(&["--threads", "3", "verify", "--suite", "fast", "--max-n", "2"]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["items"].as_array().unwrap().len(), 14);
    let ids: Vec<u64> = v["items"].as_array().unwrap().iter().map(|i| i["id"].as_u64().unwrap()).collect();
    assert_eq!(ids, (1..=14).collect::<Vec<_>>());
}
