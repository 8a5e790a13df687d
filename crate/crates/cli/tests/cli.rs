//! End-to-end tests of the batch front-end: worked example outputs, exit
//! codes, determinism, and JSON round-trips.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ramlab"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid json on stdout")
}

#[test]
fn gauss_monomial_example() {
    let out = run(
        &["gauss"],
        r#"{"f": {"terms": {"1": "0"}}, "rho": "0", "side": "Inner"}"#,
    );
    let v = stdout_json(&out);
    assert_eq!(v, serde_json::json!({"flat": "0", "eps": "1"}));
}

#[test]
fn gauss_zero_is_infinite() {
    let out = run(
        &["gauss"],
        r#"{"f": {"terms": {}}, "rho": "2", "side": "Outer"}"#,
    );
    assert_eq!(stdout_json(&out), serde_json::json!("inf"));
}

#[test]
fn supnorm_example() {
    let out = run(
        &["supnorm"],
        r#"{"f": {"terms": {"-1": "1"}}, "interval": {"lo": "0", "hi": "1"}}"#,
    );
    assert_eq!(stdout_json(&out), serde_json::json!("0"));
}

#[test]
fn ram_kummer_delta_value() {
    let out = run(&["ram"], r#"{"kummer": {"n": 3, "p": 3, "rho": "0"}}"#);
    let v = stdout_json(&out);
    assert_eq!(v["delta_value"], serde_json::json!("3"));
    assert_eq!(
        v["jumps_lower"][0],
        serde_json::json!({"flat": "1/2", "eps": "1/3"})
    );
    assert_eq!(
        v["jumps_upper"][0],
        serde_json::json!({"flat": "3/2", "eps": "1/3"})
    );
    for entry in v["swan_nat"].as_array().unwrap() {
        assert_eq!(entry["value"], serde_json::json!("0"));
    }
}

#[test]
fn newton_lq_breaks() {
    let out = run(&["newton"], r#"{"lq": {"n": 1, "m": 1, "p": 3, "l": 1}}"#);
    let v = stdout_json(&out);
    assert_eq!(
        v["breaks"],
        serde_json::json!([{"q": "1", "c": "-1/2", "mu": 1}])
    );
    assert_eq!(v["rho0"], serde_json::json!("1/2"));
}

#[test]
fn delta_csv_rows() {
    let out = run(
        &["delta", "--format", "csv"],
        r#"{"lq": {"n": 1, "m": 1, "p": 3}}"#,
    );
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "0,0\n1/2,0\n3/2,1\n");
}

#[test]
fn delta_of_explicit_profile_round_trips() {
    let out = run(&["delta"], r#"{"lq": {"n": 9, "m": 1, "p": 3}}"#);
    let v = stdout_json(&out);
    // feed the emitted function back in as an explicit profile
    let profile = serde_json::json!({"l": 1, "curves": [{"f": v, "m": 1}]});
    let again = run(&["delta"], &profile.to_string());
    assert_eq!(stdout_json(&again), v);
}

#[test]
fn proot_unit_decomposition() {
    let out = run(
        &["proot", "--p", "3"],
        r#"{"u": {"terms": {"1": "0", "0": "2"}}, "interval": {"lo": "0", "hi": "1"}}"#,
    );
    let v = stdout_json(&out);
    assert_eq!(v["leading_degree"], serde_json::json!(1));
    assert_eq!(v["remainder"]["terms"], serde_json::json!({"-1": "2"}));
    assert_eq!(
        v["shrink"],
        serde_json::json!({"sigma": "0", "strict": false})
    );
}

#[test]
fn proot_reports_impossible_as_result() {
    let out = run(
        &["proot", "--p", "3"],
        r#"{"h": {"terms": {"0": "1/4"}}, "interval": {"lo": "0", "hi": "1"}}"#,
    );
    let v = stdout_json(&out);
    assert!(v["shrink"]["impossible"].is_string());
}

#[test]
fn breakdec_regular_swap() {
    let input = r#"{"ell": 3, "n": 1,
        "group": {"order": 2, "table": [[0,1],[1,0]]},
        "chain": [[0,1],[0]],
        "action": {"0": [[1,0],[0,1]], "1": [[0,1],[1,0]]}}"#;
    let v = stdout_json(&run(&["breakdec"], input));
    assert_eq!(
        v["ranks"],
        serde_json::json!([{"index": -1, "rank": 1}, {"index": 0, "rank": 1}])
    );
    assert_eq!(v["verify"]["pass"], serde_json::json!(true));
}

#[test]
fn exit_codes() {
    // malformed json
    let out = run(&["gauss"], "{nope");
    assert_eq!(out.status.code(), Some(1));
    // schema mismatch
    let out = run(&["gauss"], r#"{"f": 3}"#);
    assert_eq!(out.status.code(), Some(1));
    // missing prime flag
    let out = run(
        &["proot"],
        r#"{"h": {"terms": {}}, "interval": {"lo": "0", "hi": "0"}}"#,
    );
    assert_eq!(out.status.code(), Some(1));
    // domain: table is not a group
    let out = run(
        &["ram"],
        r#"{"order": 2, "table": [[0,1],[1,1]], "i_map": {"1": {"flat": "0", "eps": "1/2"}},
           "gamma0": {"flat": "0", "eps": "1/2"}, "p": 3}"#,
    );
    assert_eq!(out.status.code(), Some(2));
    // domain: not provably a unit
    let out = run(
        &["proot", "--p", "3"],
        r#"{"u": {"terms": {"1": "0", "0": "0"}}, "interval": {"lo": "0", "hi": "1"}}"#,
    );
    assert_eq!(out.status.code(), Some(2));
    // domain: level set of the i-map is not a subgroup
    let out = run(
        &["ram"],
        r#"{"order": 4, "table": [[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]],
           "i_map": {"1": {"flat": "1", "eps": "1/4"},
                     "2": {"flat": "0", "eps": "1/4"},
                     "3": {"flat": "1", "eps": "1/4"}},
           "gamma0": {"flat": "0", "eps": "1/4"}, "p": 2}"#,
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn byte_identical_reruns() {
    let inputs = [
        (vec!["ram"], r#"{"kummer": {"n": 6, "p": 3, "rho": "1/2"}}"#),
        (
            vec!["newton"],
            r#"{"lq": {"n": 9, "m": 2, "p": 3, "l": 2}}"#,
        ),
        (
            vec!["delta", "--format", "csv"],
            r#"{"kummer_char": {"p": 3, "j": 1}}"#,
        ),
    ];
    for (args, input) in inputs {
        let a = run(&args, input);
        let b = run(&args, input);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn check_seed_comes_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_ramlab"))
        .args(["check"])
        .env("RAMLAB_SEED", "17")
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], serde_json::json!(17));
    assert_eq!(v["pass"], serde_json::json!(true));
}

#[test]
fn output_file_and_input_file() {
    let dir = tempfile::tempdir().unwrap();
    let input_path = dir.path().join("in.json");
    let output_path = dir.path().join("out.json");
    std::fs::write(&input_path, r#"{"kummer": {"n": 4, "p": 2}}"#).unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_ramlab"))
        .args([
            "ram",
            "--input",
            input_path.to_str().unwrap(),
            "--output",
            output_path.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&output_path).unwrap()).unwrap();
    assert_eq!(v["delta_value"], serde_json::json!("8"));
}
