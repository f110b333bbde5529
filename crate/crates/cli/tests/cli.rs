use serde_json::Value;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn examples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples")
}

fn polyaut(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_polyaut"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(s) = stdin {
            pipe.write_all(s.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap_or_else(|e| panic!("not JSON ({e}): {}", String::from_utf8_lossy(bytes)))
}

#[test]
fn documented_examples_match_golden_output() {
    let dir = examples();
    let index: Value = json(&std::fs::read(dir.join("index.json")).unwrap());
    let entries = index.as_array().unwrap();
    assert!(entries.len() >= 20);
    for e in entries {
        let job = dir.join(e["job"].as_str().unwrap());
        let expected_name = e["expected"].as_str().unwrap();
        let expected = std::fs::read_to_string(dir.join(expected_name)).unwrap();
        let code = e["exit_code"].as_i64().unwrap() as i32;
        let out = polyaut(&["run", job.to_str().unwrap()], None);
        assert_eq!(out.status.code(), Some(code), "{}", job.display());
        let actual = if expected_name.ends_with(".err.json") { &out.stderr } else { &out.stdout };
        assert_eq!(String::from_utf8_lossy(actual), expected, "{}", job.display());
    }
}

#[test]
fn headline_examples() {
    let dir = examples();
    let result = |name: &str| json(&polyaut(&["run", dir.join(name).to_str().unwrap()], None).stdout)["result"].clone();

    let r = result("classify_phi2.job.json");
    assert_eq!(r["verdict"]["n"], 1);
    assert_eq!(r["matched_form"]["form"], "phi2");
    assert_eq!(r["witnesses"], serde_json::json!(["x"]));

    let r = result("iterate_degrees.job.json");
    assert_eq!(r["degrees"], serde_json::json!([4, 16, 64]));

    let r = result("gb.job.json");
    assert_eq!(r["basis"], serde_json::json!(["x - y", "y^2 - 1"]));

    let r = result("poloni_moser.job.json");
    assert_eq!(r["conclusion"], "success");
    assert_eq!(r["jacobian"]["entry_ij_is_dPsi_i_dx_j"][1][0], "-1/2*x^3");
}

#[test]
fn output_is_deterministic() {
    let job = examples().join("classify_plane_over_function_field.job.json");
    let a = polyaut(&["run", job.to_str().unwrap()], None);
    let b = polyaut(&["run", job.to_str().unwrap()], None);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn job_from_stdin() {
    let text = std::fs::read_to_string(examples().join("gb.job.json")).unwrap();
    let out = polyaut(&["run", "-"], Some(&text));
    assert!(out.status.success());
    assert_eq!(json(&out.stdout)["result"]["order"], "lex");
}

#[test]
fn single_command_form() {
    let inputs = r#"{"vars": ["y", "z"], "map": {"coords": ["y + z^2", "z"]}}"#;
    let out = polyaut(&["fixpoints", "--field", "rational-functions:x"], Some(inputs));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out.stdout);
    assert_eq!(v["field"]["kind"], "rational_functions");
    assert_eq!(v["result"]["lex_basis"], serde_json::json!(["z^2"]));
    assert_eq!(v["result"]["locus"]["shape"], "positive_dimensional");

    let inputs = r#"{"vars": ["x", "y"], "map": {"coords": ["zeta*x", "y"]}}"#;
    let out = polyaut(&["order", "--field", "cyclotomic:3", "--order-bound", "5"], Some(inputs));
    let v = json(&out.stdout);
    assert_eq!(v["result"]["order"], 3);
    assert_eq!(v["result"]["bound"], 5);
}

#[test]
fn budget_flag_overrides_job() {
    let job = examples().join("classify_phi2.job.json");
    let out = polyaut(&["--order-bound", "3", "run", job.to_str().unwrap()], None);
    assert_eq!(json(&out.stdout)["result"]["evidence"]["order_bound"], 3);
}

#[test]
fn input_errors_exit_2() {
    let cases = [
        r#"{"schema_version": 1, "command": "gb", "inputs": {}, "extra": 1}"#,
        r#"{"schema_version": 1, "command": "frobnicate", "inputs": {}}"#,
        r#"{"schema_version": 1, "command": "gb", "inputs": {"vars": ["x"]}}"#,
        r#"{"schema_version": 1, "command": "gb", "inputs": {"vars": ["x"], "generators": ["x +"]}}"#,
        r#"{"schema_version": 1, "command": "compose", "inputs": {"vars": ["x", "y"], "f": {"coords": ["x"]}, "g": {"coords": ["x", "y"]}}}"#,
        r#"{"schema_version": 1, "command": "gb", "budgets": {"max_pears": 3}, "inputs": {"vars": ["x"], "generators": ["x"]}}"#,
        "not json",
    ];
    for c in cases {
        let out = polyaut(&["run"], Some(c));
        assert_eq!(out.status.code(), Some(2), "{c}");
        assert!(out.stdout.is_empty());
        let err = json(&out.stderr);
        assert_eq!(err["error"]["exit_code"], 2);
        assert!(err["error"]["message"].as_str().is_some_and(|m| !m.is_empty()));
    }
}

#[test]
fn inconclusive_classification_exits_3_with_report() {
    let job = examples().join("classify_inconclusive.job.json");
    let out = polyaut(&["run", job.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out.stdout)["result"]["verdict"]["kind"], "inconclusive");
}

#[test]
fn report_file_matches_stdout() {
    let path = std::env::temp_dir().join(format!("polyaut-report-{}.json", std::process::id()));
    let out = polyaut(&["--degree-bound", "2", "poloni-moser", "--json", path.to_str().unwrap()], None);
    assert!(out.status.success());
    let written = std::fs::read(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(written, out.stdout);
    assert_eq!(json(&written)["result"]["degree_bound"], 2);
}

#[test]
fn library_runner_agrees_with_binary() {
    let text = std::fs::read_to_string(examples().join("reduce.job.json")).unwrap();
    let (rendered, exit, ok) = polyaut_cli::run_text(&text);
    assert!(ok);
    assert_eq!(exit, polyaut_cli::ExitCode::Ok);
    let out = polyaut(&["run", "-"], Some(&text));
    assert_eq!(format!("{rendered}\n").into_bytes(), out.stdout);
}
