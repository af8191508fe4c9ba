use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn qident(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qident")).args(args).output().unwrap()
}

fn json_stdout(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn terms(v: &Value) -> Vec<(i64, String)> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|t| (t["exp_quarters"].as_i64().unwrap(), t["coeff"].as_str().unwrap().to_string()))
        .collect()
}

fn ones(exps: &[i64]) -> Vec<(i64, String)> {
    exps.iter().map(|&e| (e, "1".to_string())).collect()
}

#[test]
fn eval_trinomial_in_quarter_units() {
    let v = json_stdout(&qident(&["eval", "trinom", "--L", "2", "--A", "0", "--n", "0"]));
    assert_eq!(terms(&v["value"]), ones(&[0, 4, 8]));
}

#[test]
fn eval_fermi_at_l_zero() {
    let v = json_stdout(&qident(&["eval", "fermi", "--p", "4", "--a", "1", "--b", "1", "--i", "0", "--L", "0"]));
    assert_eq!(terms(&v["value"]), ones(&[0]));
    assert_eq!(v["params"]["L"], 0);
}

#[test]
fn eval_character_leading_term() {
    let v = json_stdout(&qident(&["eval", "chi", "--p", "4", "--r", "1", "--s", "1", "--cutoff", "20"]));
    assert_eq!(v["value"]["cutoff_quarters"], 80);
    assert_eq!(terms(&v["value"]["terms"])[0], (0, "1".to_string()));
}

#[test]
fn eval_negative_arguments() {
    let v = json_stdout(&qident(&["eval", "binom", "--n", "-3", "--m", "2", "--modified"]));
    assert_eq!(terms(&v["value"]), ones(&[-12]));
}

#[test]
fn usage_and_parameter_errors_exit_2() {
    let out = qident(&["eval", "trinom", "--L", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qident(&["eval", "fermi", "--p", "3", "--a", "1", "--b", "1", "--L", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p = 3"));
    let out = qident(&["verify", "--p", "2..5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qident(&["verify", "--suite", "nm-oracle", "--l-max", "-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_passes_and_reports_text() {
    let out = qident(&["verify", "--suite", "even-identities", "--p", "4", "--l-max", "10"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("PASS even-identities:"), "{text}");
}

#[test]
fn json_report_is_independent_of_jobs() {
    let run = |jobs: &str| {
        let out = qident(&[
            "verify", "--suite", "all", "--p", "4..5", "--l-max", "3", "--cutoff", "6", "--format", "json",
            "--jobs", jobs,
        ]);
        assert!(out.status.success());
        out.stdout
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    let lines: Vec<Value> = one
        .split(|&b| b == b'\n')
        .filter(|l| !l.is_empty())
        .map(|l| serde_json::from_slice(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 10);
    for r in &lines {
        assert_eq!(r["totals"]["failed"], 0);
        assert!(r["instances"][0]["equation"].is_string());
    }
}

#[test]
fn config_file_with_flag_override() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "suite = \"appendix-a\"\np = \"4..5\"\nl-max = 4\nformat = \"json\"").unwrap();
    let path = file.path().to_str().unwrap();

    let v = json_stdout(&qident(&["verify", "--config", path]));
    assert_eq!(v["suite"], "appendix-a");
    let from_file = v["totals"]["passed"].as_u64().unwrap();

    let v = json_stdout(&qident(&["verify", "--config", path, "--l-max", "6"]));
    assert!(v["totals"]["passed"].as_u64().unwrap() > from_file);

    let out = qident(&["verify", "--config", path, "--format", "text"]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("PASS appendix-a:"));
}

#[test]
fn bad_config_file_exits_2() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "unknown = 1").unwrap();
    let out = qident(&["verify", "--config", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
