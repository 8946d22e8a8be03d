use serde_json::Value;
use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_semisign"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .env_remove("SEMISIGN_PRECISION_BITS")
        .env_remove("SEMISIGN_SEARCH_BUDGET")
        .env_remove("SEMISIGN_MASSER_BOUND")
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(args: &[&str], input: &str) -> (Value, i32) {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let out = run(&a, input);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (v, out.status.code().unwrap())
}

const PAIR: &str = r#"{"generators": [[["0","2"],["2","0"]], [["1","1"],["1","1"]]]}"#;
const ROTATION: &str = r#"{"generators": [[["3/5","-4/5"],["4/5","3/5"]]]}"#;

#[test]
fn analyze_minus_one() {
    let (v, code) = json(&["analyze-matrix"], r#"{"matrix": [["-1"]]}"#);
    assert_eq!(code, 0);
    assert_eq!(v["set"]["period"], 2);
    assert_eq!(v["set"]["residues"], serde_json::json!([0]));
    assert_eq!(v["set"]["threshold"], 1);
    assert_eq!(v["verdict"], "NO");
    assert_eq!(v["conditional"], false);
}

#[test]
fn rotation_is_no() {
    let (v, code) = json(&["decide-nonnegative"], ROTATION);
    assert_eq!((v["verdict"].as_str().unwrap(), code), ("NO", 0));
}

#[test]
fn positive_pair_with_witness() {
    let (v, code) = json(&["decide-positive"], PAIR);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "YES");
    assert_eq!(v["witness"]["exponents"], serde_json::json!([1, 1]));
    assert_eq!(v["witness"]["power"], 1);
    assert_eq!(v["witness"]["subset"], serde_json::json!([0, 1]));
}

#[test]
fn verify_round_trip() {
    let cases = [
        ("decide-positive", PAIR),
        ("decide-nonnegative", r#"{"generators": [[["1","0"],["0","-1"]], [["-1","0"],["0","1"]]]}"#),
        ("decide-nonnegative", r#"{"generators": [[["1","1"],["0","1"]]]}"#),
        ("analyze-matrix", r#"{"matrix": [["0","1"],["-1","0"]]}"#),
        ("masser-basis", r#"{"numbers": ["2", "4", {"re": "0", "im": "1"}]}"#),
        ("iplog", r#"{"unknowns": 1, "rows": [[{"log": "2"}]]}"#),
        ("reduce-pfa", r#"{"u": ["1"], "v": ["1"], "generators": [[["1"]]]}"#),
    ];
    let dir = tempfile::tempdir().unwrap();
    for (cmd, input) in cases {
        let (report, code) = json(&[cmd], input);
        assert_eq!(code, 0, "{cmd}");
        let path = dir.path().join("report.json");
        std::fs::write(&path, serde_json::to_string(&report).unwrap()).unwrap();
        let out = run(&[cmd, "--verify", path.to_str().unwrap()], input);
        assert_eq!(out.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn tampered_witness_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"witness": {"subset": [0], "exponents": [1], "power": 1}}"#).unwrap();
    let out = run(&["decide-positive", "--verify", path.to_str().unwrap()], PAIR);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn deterministic_output() {
    let a = run(&["decide-nonnegative", "--format", "json"], ROTATION);
    let b = run(&["decide-nonnegative", "--format", "json"], ROTATION);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn input_errors_exit_one() {
    let out = run(&["analyze-matrix"], r#"{"matrix": [["1", 2.5]]}"#);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["analyze-matrix"], "{\n  \"matrix\": [[\"1\",");
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
    let out = run(&["decide-positive"], r#"{"generators": [[["1","0"]], [["1"]]]}"#);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn non_commuting_points_to_reduction() {
    let out = run(&["decide-positive"], r#"{"generators": [[["0","1"],["0","0"]], [["0","0"],["1","0"]]]}"#);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("reduce-pfa"));
}

#[test]
fn unknown_exits_two() {
    // ln(2^100 + 1) - ln(2^100) cannot be separated from zero at 64 bits
    let input = r#"{"unknowns": 1, "rows": [[{"terms": [["1", "1267650600228229401496703205377"], ["-1", "1267650600228229401496703205376"]]}]]}"#;
    let (v, code) = json(&["iplog", "--precision-bits", "64"], input);
    assert_eq!((v["verdict"].as_str().unwrap(), code), ("UNKNOWN", 2));
    let (v, code) = json(&["iplog"], input);
    assert_eq!((v["verdict"].as_str().unwrap(), code), ("YES", 0));
}

#[test]
fn budgets_from_environment() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_semisign"))
        .args(["analyze-matrix", "--format", "json"])
        .env("SEMISIGN_PRECISION_BITS", "1024")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(br#"{"matrix": [["2"]]}"#).unwrap();
    let out = child.wait_with_output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["budgets"]["precision_bits"], 1024);
}

#[test]
fn pfa_reduction() {
    let (v, code) = json(&["reduce-pfa", "--max-len", "3"], r#"{"u": ["1"], "v": ["1"], "generators": [[["1"]]]}"#);
    assert_eq!(code, 0);
    assert_eq!(v["generators"].as_array().unwrap().len(), 3);
    assert_eq!(v["nonnegative_words"][0], "U V");
    let (v, code) = json(&["reduce-pfa", "--max-len", "3"], r#"{"u": ["1"], "v": ["0"], "generators": [[["1"]]]}"#);
    assert_eq!((v["verdict"].as_str().unwrap(), code), ("UNKNOWN", 2));
    let out = run(&["reduce-pfa"], r#"{"u": ["1"], "v": ["1"], "generators": [[["2"]]]}"#);
    assert_eq!(out.status.code(), Some(1));
}
