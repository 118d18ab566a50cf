use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn ample(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ample"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn palindrome_input() -> Value {
    json!({
        "g": { "base": "2", "depth": 2, "cocycle": [2, 0, -2, 0] },
        "u1": { "depth": 2, "residues": [0, 1] },
        "u2": { "depth": 2, "residues": [1, 2] },
    })
}

#[test]
fn odometer_index_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    std::fs::write(&path, r#"{"base":{"period":[2]},"depth":0,"cocycle":[1]}"#).unwrap();
    let out = ample(&["elem", "index", "--in", path.to_str().unwrap()], "");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"], json!({ "index": "1" }));
}

#[test]
fn certificate_round_trip() {
    let out = ample(&["prop-e", "decompose"], &palindrome_input().to_string());
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["factors"], 3);
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["ok"] == true));

    let cert = r["result"]["certificate"].to_string();
    let verified = ample(&["prop-e", "verify"], &cert);
    assert_eq!(verified.status.code(), Some(0));

    let mut tampered = r["result"]["certificate"].clone();
    tampered["factors"].as_array_mut().unwrap().pop();
    let rejected = ample(&["prop-e", "verify"], &tampered.to_string());
    assert_eq!(rejected.status.code(), Some(1));
    assert_eq!(report(&rejected)["ok"], false);
}

#[test]
fn selftest_suite_passes() {
    let out = ample(&["selftest", "--suite", "group-laws"], "");
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["suite"], "group-laws");
    assert_eq!(r["ok"], true);
}

#[test]
fn output_is_deterministic() {
    let run = || ample(&["elem", "random", "--seed", "7", "--base", "2;3"], "").stdout;
    assert_eq!(run(), run());
    let other = ample(&["elem", "random", "--seed", "8", "--base", "2;3"], "").stdout;
    assert_ne!(run(), other);
    let input = palindrome_input().to_string();
    assert_eq!(ample(&["prop-e", "decompose"], &input).stdout, ample(&["prop-e", "decompose"], &input).stdout);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nd.json");
    let out = ample(&["nd", "build", "--stages", "3", "--out", path.to_str().unwrap()], "");
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["result"]["construction"]["stages"].as_array().unwrap().len(), 3);
}

#[test]
fn exit_statuses() {
    assert_eq!(ample(&["elem", "index"], "{not json").status.code(), Some(2));
    assert_eq!(ample(&["elem", "index", "--base", "1"], "{}").status.code(), Some(2));
    assert_eq!(ample(&["elem", "odometer", "--depth-limit", "99"], "").status.code(), Some(2));
    let deep = r#"{"base":"2","depth":30,"cocycle":[1]}"#;
    assert_eq!(ample(&["elem", "index"], deep).status.code(), Some(3));
    let shallow = r#"{"base":"2","depth":3,"cocycle":[1,1,1,1,1,1,1,1]}"#;
    assert_eq!(ample(&["elem", "index", "--depth-limit", "2"], shallow).status.code(), Some(0));
    let nonzero = r#"{"h":{"base":"2","depth":0,"cocycle":[1]}}"#;
    assert_eq!(ample(&["prop-e", "kernel"], nonzero).status.code(), Some(1));
    assert_eq!(ample(&["oracle", "maximality", "--n", "9", "--y", "0"], "").status.code(), Some(3));
}

#[test]
fn oracle_and_stabilizers() {
    let out = ample(&["oracle", "maximality", "--n", "4", "--y", "0,1"], "");
    let r = report(&out);
    assert_eq!(r["result"]["partition_stabilizer_order"], 8);
    assert_eq!(r["result"]["class"]["maximal"], false);
    assert_eq!(r["result"]["brute_force_maximal"], false);

    let realize = json!({
        "y": { "base": "2", "points": [{ "period": [0] }, { "pre": [1, 0, 1], "period": [0] }] },
        "pi": [1, 0],
        "z": { "points": [{ "pre": [0, 1], "period": [0] }] },
    });
    let out = ample(&["stab", "realize"], &realize.to_string());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let kr = ample(&["kr"], r#"{"u":{"depth":2,"residues":[0,3]}}"#);
    assert_eq!(report(&kr)["result"]["heights"], json!([1, 3]));
    let ret = ample(&["return-map"], r#"{"u":{"depth":2,"residues":[0,3]}}"#);
    assert_eq!(report(&ret)["result"]["first_return_index"], "1");
}
