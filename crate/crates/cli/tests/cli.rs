use std::path::PathBuf;
use std::process::{Command, Output};

use clover_core::hset::hset_generators;
use clover_core::io::{parse_tangle, series_from_json};
use clover_core::milnor::{milnor_number, FramingCheck, TanglePresentation};
use clover_core::slmove::{transform, SlMoveInput};
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn clover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clover")).args(args).output().expect("binary runs")
}

fn with_inputs(cmd: &str, files: &[&str], rest: &[&str]) -> Output {
    let paths: Vec<String> = files.iter().map(|f| data(f).display().to_string()).collect();
    let mut args = vec![cmd.to_string()];
    for p in &paths {
        args.push("-i".into());
        args.push(p.clone());
    }
    args.extend(rest.iter().map(|s| s.to_string()));
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    clover(&refs)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn machine(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("machine output is JSON")
}

fn load(name: &str) -> TanglePresentation {
    parse_tangle(&std::fs::read_to_string(data(name)).unwrap(), FramingCheck::Framing).unwrap()
}

#[test]
fn mu_on_borromean() {
    let o = with_inputs("mu", &["borromean.json"], &["--seq", "123"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "mu(123) = 1");
}

#[test]
fn mu_matches_library() {
    let t = load("hopf_pairs_twisted.json");
    for s in ["12", "1234", "3124", "2134"] {
        let o = with_inputs("mu", &["hopf_pairs_twisted.json"], &["--seq", s, "--format", "machine"]);
        let v = machine(&o);
        assert_eq!(v["schema_version"], 1);
        let lib = milnor_number(&t, &s.parse().unwrap()).unwrap();
        assert_eq!(v["values"][0]["mu"], Value::from(i64::try_from(lib).unwrap()), "{s}");
    }
}

#[test]
fn mubar_and_delta() {
    let o = with_inputs("mubar", &["borromean.json"], &["--seq", "123"]);
    assert_eq!(stdout(&o).trim(), "mubar(123) = 1 mod 0");
    let o = with_inputs("delta", &["hopf_pairs.json"], &["--seq", "1234", "--k", "1", "--format", "machine"]);
    let v = machine(&o);
    assert_eq!(v["kind"], "delta_k");
    assert_eq!(v["values"][0]["delta"], 1);
}

#[test]
fn classify_identical_files() {
    let o = with_inputs("classify", &["hopf_pairs.json", "hopf_pairs.json"], &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "equivalent");
}

#[test]
fn classify_inequivalent_pairs() {
    let o = with_inputs("classify", &["hopf_pairs.json", "trivial4.json"], &["--explain"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("mu(12) differs"));

    let o = with_inputs("classify", &["hopf_pairs.json", "hopf_pairs_twisted.json"], &["--format", "machine"]);
    assert_eq!(o.status.code(), Some(3));
    let v = machine(&o);
    assert_eq!(v["verdict"], "inequivalent");
    assert_eq!(v["reason"]["kind"], "disjoint");
}

#[test]
fn hset_matches_library() {
    let o = with_inputs("hset", &["hopf_pairs.json"], &["--k", "1", "--j", "4", "--format", "machine"]);
    assert_eq!(o.status.code(), Some(0));
    let v = machine(&o);
    let l = hset_generators(&load("hopf_pairs.json"), 1, 4).unwrap();
    let gens = v["lattice"]["gens"].as_array().unwrap();
    assert_eq!(gens.len(), l.gens.rows());
    for (r, row) in gens.iter().enumerate() {
        let row: Vec<i64> = row.as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
        let lib: Vec<i64> = l.gens.row(r).iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(row, lib);
    }
    assert_eq!(v["lattice"]["basis"][0], "123");
}

#[test]
fn slmove_matches_library() {
    let o = with_inputs(
        "slmove",
        &["hopf_pairs.json", "string_link.json"],
        &["--degree", "3", "--seq", "1234", "--k", "1", "--format", "machine"],
    );
    assert_eq!(o.status.code(), Some(0));
    let v = machine(&o);
    let lib = transform(&SlMoveInput::new(load("hopf_pairs.json"), load("string_link.json"), 3).unwrap()).unwrap();
    let series: Vec<_> = v["series"].as_array().unwrap().iter().map(|s| series_from_json(s).unwrap()).collect();
    assert_eq!(series, lib);
    assert_eq!(v["congruence"][0]["holds"], true);
}

#[test]
fn verify_is_reproducible() {
    let args = ["verify", "--prop", "sl-congruence", "--seed", "7", "--cases", "20", "--format", "machine"];
    let a = clover(&args);
    let b = clover(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = machine(&a);
    assert_eq!(v["suites"][0]["passed"], true);
    assert_eq!(v["suites"][0]["seed"], 7);
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"n\": 2, \"longitudes\": [[[1, 1]], []]}").unwrap();
    let o = clover(&["mu", "-i", bad.to_str().unwrap(), "--seq", "12"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("framing"));

    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(clover(&["mu", "-i", bad.to_str().unwrap(), "--seq", "12"]).status.code(), Some(2));

    let o = with_inputs("mu", &["borromean.json"], &[]);
    assert_eq!(o.status.code(), Some(2));
    let o = with_inputs("mu", &["borromean.json"], &["--seq", "14"]);
    assert_eq!(o.status.code(), Some(2));
    let o = with_inputs("classify", &["borromean.json", "hopf_pairs.json"], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(clover(&["verify", "--prop", "nope"]).status.code(), Some(2));
    assert_eq!(clover(&["frobnicate"]).status.code(), Some(2));
}
