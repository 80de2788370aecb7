use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linmono")).args(args).output().unwrap()
}

fn documents(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn validator() -> jsonschema::Validator {
    let schema: Value = serde_json::from_str(linmono::cli::REPORT_SCHEMA).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn assert_valid(v: &jsonschema::Validator, doc: &Value) {
    let errors: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{doc}");
}

#[test]
fn every_subcommand_matches_the_schema() {
    let v = validator();
    let cases: &[&[&str]] = &[
        &["analyze", "--q", "3", "--lin", "0,0,0,1"],
        &["analyze", "--q", "3", "--lin", "0,1,0,1"],
        &["analyze", "--q", "2", "--lin", "0,1,1,1"],
        &["analyze", "--q", "2", "--lin", "0,1,0,1", "--kmax", "4"],
        &["analyze", "--q", "9", "--lin", "0,[1,1],1"],
        &["sample", "--q", "3", "--lin", "0,1,1", "--kmax", "3"],
        &["census", "--q", "3", "--n", "2"],
        &["census", "--q", "3", "--n", "3", "--normalizer-only"],
        &["singer", "--q", "2", "--n", "3"],
        &["verify", "gmg", "--q", "9"],
        &["verify", "disc", "--q", "3", "--n", "2"],
        &["verify", "identity", "--q", "2", "--n", "3"],
        &["verify", "alt2", "--q", "4", "--n", "2"],
        &["verify", "normalizer", "--q", "3", "--n", "2"],
        &["analyze", "--q", "6", "--lin", "0,1"],
    ];
    for args in cases {
        let out = run(args);
        let docs = documents(&out);
        assert_eq!(docs.len(), 1, "{args:?}");
        assert_valid(&v, &docs[0]);
        assert!(!String::from_utf8_lossy(&out.stderr).trim().is_empty(), "{args:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["analyze", "--q", "3", "--lin", "0,0,0,1"]).status.code(), Some(0));
    assert_eq!(run(&["analyze", "--q", "2", "--lin", "0,1,0,1", "--kmax", "4"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "disc", "--q", "3", "--n", "2"]).status.code(), Some(0));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["analyze", "--q", "6", "--lin", "0,1"]).status.code(), Some(1));
}

#[test]
fn usage_errors_name_the_flag() {
    let cases: &[(&[&str], &str)] = &[
        (&["analyze", "--q", "3", "--lin", "0,1,1", "--n", "3"], "--n"),
        (&["analyze", "--q", "6", "--lin", "0,1"], "--q"),
        (&["analyze", "--q", "3", "--lin", "0,1,2"], "--lin"),
        (&["analyze", "--q", "3", "--lin", "0,0,1", "--budget", "0"], "--budget"),
        (&["analyze", "--q", "3", "--lin", "0,0,1", "--batch", "/nonexistent/x"], "--batch"),
    ];
    for (args, flag) in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let docs = documents(&out);
        let msg = docs[0]["error"].as_str().unwrap();
        assert!(msg.contains(flag), "{args:?}: {msg}");
    }
}

#[test]
fn schema_flag_prints_the_schema() {
    let out = run(&["--json-schema"]);
    assert_eq!(out.status.code(), Some(0));
    let schema: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(jsonschema::validator_for(&schema).is_ok());
    assert!(schema["oneOf"].is_array());
}

#[test]
fn batch_runs_one_report_per_line() {
    let dir = std::env::temp_dir().join(format!("linmono-batch-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("lines.txt");
    std::fs::write(&file, "--lin 0,0,0,1\n\n--lin 0,1,0,1\n").unwrap();
    let out = run(&["analyze", "--q", "3", "--batch", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let docs = documents(&out);
    assert_eq!(docs.len(), 2);
    assert_eq!(docs[0]["verdict"], "GammaL");
    assert_eq!(docs[1]["verdict"], "GL");
    let v = validator();
    docs.iter().for_each(|d| assert_valid(&v, d));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn output_flag_writes_the_report() {
    let dir = std::env::temp_dir().join(format!("linmono-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("report.json");
    let out = run(&["singer", "--q", "3", "--n", "2", "--output", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_valid(&validator(), &doc);
    assert_eq!(doc["relation_holds"], true);
    std::fs::remove_dir_all(&dir).ok();
}
