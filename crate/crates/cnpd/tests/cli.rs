//! End-to-end tests of the `cnpd` binary: documented examples, exit codes,
//! and byte-identical determinism of the JSON output.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn write_file(dir: &tempfile::TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cnpd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

#[test]
fn circuits_example_on_dependent_triple() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_file(
        &dir,
        "spec_236.json",
        r#"{"b": ["1/3","1/3","1/3"], "n": [2,3,6]}"#,
    );
    let out = run(&["circuits", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_json(&out),
        json!({
            "d": 3,
            "log_independent": false,
            "circuits": [{"J": [1,2,3], "J1": [1,2], "J2": [3], "beta": [1,1,1]}],
        })
    );
}

#[test]
fn classify_example_generating_pair() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_file(
        &dir,
        "a.json",
        r#"{"b": ["1/2","1/4","1/4"], "n": [2,3,12]}"#,
    );
    let b = write_file(
        &dir,
        "b.json",
        r#"{"b": ["1/4","1/2","1/4"], "n": [2,3,18]}"#,
    );
    let out = run(&["classify", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "IsometricallyIsomorphic");
    assert_eq!(v["theorem"], "ThmC");
    assert_eq!(v["permutation"], json!([2, 1, 3]));
    assert_eq!(v["not_isomorphic_to_free_multiplier_algebra_dim"], 2);
}

#[test]
fn validate_reports_violated_clause_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_file(&dir, "bad.json", r#"{"b": ["1/2","1/4"], "n": [2,3]}"#);
    let out = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["error"], "validation");
    assert_eq!(v["violated_clause"], "weights_sum");
}

#[test]
fn unknown_command_exits_64() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(64));
    assert!(!out.stderr.is_empty(), "usage text expected on stderr");
}

#[test]
fn domain_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_file(&dir, "s.json", r#"{"b": ["1/2","1/2"], "n": [2,3]}"#);
    // zero point carries no parameter
    let out = run(&[
        "invert-point",
        spec.to_str().unwrap(),
        "--point",
        "0,0",
        "--tol",
        "1e-10",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout_json(&out)["error"], "domain");

    // half-plane violation
    let out = run(&["eval", spec.to_str().unwrap(), "--s", "-1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn member_exact_and_numeric() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_file(
        &dir,
        "s.json",
        r#"{"b": ["4/9","4/9","1/9"], "n": [2,3,6]}"#,
    );
    let path = spec.to_str().unwrap();
    let member = run(&["member", path, "--point", "1/2,1/2,3/16", "--exact"]);
    assert_eq!(member.status.code(), Some(0));
    assert_eq!(stdout_json(&member)["member"], true);

    let non_member = run(&["member", path, "--point", "1/2,1/2,1/4", "--exact"]);
    assert_eq!(stdout_json(&non_member)["member"], false);

    let numeric = run(&["member", path, "--point", "1/2,1/2,3/16"]);
    assert_eq!(stdout_json(&numeric)["member"], true);
}

#[test]
fn weights_and_cnp_check_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_file(&dir, "s.json", r#"{"b": ["1/2","1/2"], "n": [2,3]}"#);
    let weights = run(&["weights", spec.to_str().unwrap(), "--limit", "6"]);
    assert_eq!(weights.status.code(), Some(0));
    let v = stdout_json(&weights);
    assert_eq!(
        v,
        json!({"limit": 6, "coeffs": {"1": "1", "2": "1/2", "3": "1/2", "4": "1/4", "6": "1/2"}})
    );

    // pipe the expansion back through the CNP test
    let wfile = write_file(
        &dir,
        "w.json",
        &weights
            .stdout
            .iter()
            .map(|&b| b as char)
            .collect::<String>(),
    );
    let check = run(&["cnp-check", wfile.to_str().unwrap(), "--limit", "6"]);
    let v = stdout_json(&check);
    assert_eq!(v["is_cnp_up_to_limit"], true);
    assert_eq!(v["witness"], Value::Null);

    // Hardy-space weights fail with witness 6
    let ones: Value = json!({
        "limit": 10,
        "coeffs": (1..=10).map(|n| (n.to_string(), json!("1"))).collect::<serde_json::Map<_,_>>(),
    });
    let hardy = write_file(&dir, "hardy.json", &ones.to_string());
    let check = run(&["cnp-check", hardy.to_str().unwrap(), "--limit", "10"]);
    let v = stdout_json(&check);
    assert_eq!(v["is_cnp_up_to_limit"], false);
    assert_eq!(v["witness"], 6);
}

#[test]
fn similar_and_variety_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_file(
        &dir,
        "a.json",
        r#"{"b": ["1/3","1/3","1/3"], "n": [2,3,6]}"#,
    );
    let b = write_file(
        &dir,
        "b.json",
        r#"{"b": ["1/2","1/5","3/10"], "n": [5,7,35]}"#,
    );
    let out = run(&["similar", a.to_str().unwrap(), b.to_str().unwrap()]);
    let v = stdout_json(&out);
    assert_eq!(v["similar"], true);
    assert_eq!(v["certificate"]["weight_identities"][0]["lhs"], "1/30");

    let out = run(&["variety", a.to_str().unwrap()]);
    let v = stdout_json(&out);
    assert_eq!(v["full_ball"], false);
    assert_eq!(v["relations"][0]["Asq"], "1/9");
    assert_eq!(v["relations"][0]["Bsq"], "1/3");
}

#[test]
fn eval_and_invert_point_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_file(
        &dir,
        "s.json",
        r#"{"b": ["1/2","1/4","1/4"], "n": [2,3,12]}"#,
    );
    let path = spec.to_str().unwrap();
    let out = run(&["eval", path, "--s", "1"]);
    let v = stdout_json(&out);
    let f: Vec<f64> = v["f"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["re"].as_str().unwrap().parse().unwrap())
        .collect();
    assert!((f[0] - 0.5f64.sqrt() / 2.0).abs() < 1e-12);

    // kernel value at s = u = 1 for the two-frequency spec: 72/59
    let two = write_file(&dir, "two.json", r#"{"b": ["1/2","1/2"], "n": [2,3]}"#);
    let out = run(&["eval", two.to_str().unwrap(), "--s", "1", "--u", "1"]);
    let v = stdout_json(&out);
    let re: f64 = v["K"]["re"].as_str().unwrap().parse().unwrap();
    assert!((re - 72.0 / 59.0).abs() < 1e-12);

    // recover the parameter from the feature point string
    let point = format!("{}+0i,{},{}", f[0], f[1], f[2]);
    let out = run(&["invert-point", path, "--point", &point, "--tol", "1e-6"]);
    let v = stdout_json(&out);
    let s_re: f64 = v["s"]["re"].as_str().unwrap().parse().unwrap();
    assert!((s_re - 1.0).abs() < 1e-7);
}

#[test]
fn zeta_factor_and_dm() {
    let dir = tempfile::tempdir().unwrap();
    let halves = write_file(
        &dir,
        "halves.json",
        &json!({"b": (0..10).map(|_| "1/2").collect::<Vec<_>>()}).to_string(),
    );
    let out = run(&["zeta-factor", halves.to_str().unwrap(), "--limit", "10"]);
    let v = stdout_json(&out);
    assert_eq!(v["holds_up_to_limit"], false);
    assert_eq!(v["witness"], 2);

    let out = run(&["dm", "--m", "3", "--n", "4"]);
    assert_eq!(stdout_json(&out)["value"], 6);
}

#[test]
fn gram_command_runs_psd_check() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_file(
        &dir,
        "s.json",
        r#"{"b": ["1/3","1/3","1/3"], "n": [2,3,6]}"#,
    );
    let pts = write_file(
        &dir,
        "pts.json",
        r#"[{"re": 1.0, "im": 0.0}, {"re": 2.0, "im": 0.5}, {"re": "3/2", "im": "-1"}]"#,
    );
    for mode in ["kernel", "one-minus-inv"] {
        let out = run(&[
            "gram",
            spec.to_str().unwrap(),
            "--points",
            pts.to_str().unwrap(),
            "--mode",
            mode,
        ]);
        assert_eq!(out.status.code(), Some(0), "mode {mode}");
        let v = stdout_json(&out);
        assert_eq!(v["is_psd"], true);
        assert_eq!(v["size"], 3);
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_file(
        &dir,
        "a.json",
        r#"{"b": ["1/2","1/4","1/4"], "n": [2,3,12]}"#,
    );
    let b = write_file(
        &dir,
        "b.json",
        r#"{"b": ["1/4","1/2","1/4"], "n": [2,3,18]}"#,
    );
    for args in [
        vec!["circuits", a.to_str().unwrap()],
        vec!["variety", a.to_str().unwrap()],
        vec!["classify", a.to_str().unwrap(), b.to_str().unwrap()],
        vec!["eval", a.to_str().unwrap(), "--s", "1/2+2i"],
        vec!["weights", a.to_str().unwrap(), "--limit", "24"],
    ] {
        let first = run(&args);
        let second = run(&args);
        assert_eq!(first.stdout, second.stdout, "args {args:?}");
        assert_eq!(first.status.code(), Some(0));
    }
}

#[test]
fn precision_env_variable_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_file(&dir, "g.json", r#"{"b": ["1","1"], "n": [2,4]}"#);
    let out = Command::new(env!("CARGO_BIN_EXE_cnpd"))
        .args(["rho", spec.to_str().unwrap(), "--tol", "1e-12"])
        .env("CNPD_PRECISION_BITS", "256")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let rho = stdout_json(&out)["rho"].as_f64().unwrap();
    let expected = ((5f64.sqrt() + 1.0) / 2.0).log2();
    assert!((rho - expected).abs() < 1e-10);
}
