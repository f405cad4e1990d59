use std::path::PathBuf;
use std::process::{Command, Output};

use lubin_core::dynamics::FamilyDescriptor;
use serde_json::Value;

fn family(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("families")
        .join(format!("{name}.json"))
        .to_string_lossy()
        .into_owned()
}

fn lubin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lubin")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> (i32, String, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = lubin(&all);
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    (out.status.code().unwrap(), text, v)
}

#[test]
fn json_reports_are_deterministic_and_round_trip() {
    let fam = family("lt_z3");
    for cmd in ["family-check", "log", "lambda-stats", "profile", "recover-group", "mu-search"] {
        let args = [cmd, "--family", fam.as_str(), "--degree", "27"];
        let (code, first, v) = json(&args);
        let (_, second, _) = json(&args);
        assert_eq!(code, 0, "{cmd}: {first}");
        assert_eq!(first, second, "{cmd} output differs between runs");
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", first);
        assert_eq!(v["command"], cmd);
        assert_eq!(v["passed"], true);
        assert_eq!(v["invocation"]["degree"], 27);
        assert_eq!(v["invocation"]["ring"]["p"], 3);
    }
}

#[test]
fn recorded_invocation_reproduces_the_report() {
    let fam = family("sqrt3");
    let (_, first, v) = json(&["profile", "--family", fam.as_str(), "--alpha", "1+pi, 1-pi^2"]);
    let argv: Vec<String> = v["invocation"]["argv"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a.as_str().unwrap().to_string())
        .collect();
    let out = lubin(&argv.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), first);
}

#[test]
fn family_files_parse_and_round_trip() {
    for name in ["mult_z2", "lt_z5", "unram9", "sqrt3", "conj_z5", "perturbed_z3", "corrupted_z3"] {
        let text = std::fs::read_to_string(family(name)).unwrap();
        let mut v: Value = serde_json::from_str(&text).unwrap();
        v.as_object_mut().unwrap().remove("ring");
        let d: FamilyDescriptor = serde_json::from_value(v.clone()).unwrap();
        assert_eq!(serde_json::to_value(&d).unwrap(), v, "{name}");
    }
}

#[test]
fn exit_codes() {
    let ok = lubin(&["lt-construct", "--ring", r#"{"p": 2}"#, "--f", "deg 16; *; 1:10, 2:1"]);
    assert_eq!(ok.status.code(), Some(0));
    let text = String::from_utf8(ok.stdout).unwrap();
    assert!(text.ends_with("PASS\n"), "{text}");

    let not_lt = lubin(&["lt-construct", "--ring", r#"{"p": 2}"#, "--f", "deg 16; *; 1:1, 2:1"]);
    assert_eq!(not_lt.status.code(), Some(1));

    let perturbed = family("perturbed_z3");
    assert_eq!(lubin(&["family-check", "--family", &perturbed]).status.code(), Some(1));

    let usage = lubin(&["log", "--no-such-flag"]);
    assert_eq!(usage.status.code(), Some(2));
    let missing = lubin(&["log", "--family", "does-not-exist.json"]);
    assert_eq!(missing.status.code(), Some(2));
    let bad_ring = lubin(&["lt-construct", "--ring", r#"{"p": 4}"#, "--f", "deg 4; *; 1:2"]);
    assert_eq!(bad_ring.status.code(), Some(2));
    assert!(String::from_utf8(bad_ring.stderr).unwrap().contains("invalid ring"));
}

#[test]
fn endomorphisms_between_two_series() {
    let (code, _, v) = json(&[
        "endo",
        "--ring",
        r#"{"p": 3}"#,
        "--f",
        "deg 20; *; 1:10, 3:1",
        "--g",
        "deg 20; *; 1:10, 2:10, 3:1",
        "--alpha",
        "1, 2, pi+1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["endomorphisms"].as_array().unwrap().len(), 3);
}
