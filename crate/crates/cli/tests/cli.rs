use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn oscillab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oscillab")).args(args).output().unwrap()
}

fn run_in(dir: &Path, cmd: &str, text: &str) -> Output {
    let cfg = dir.join("cfg.toml");
    fs::write(&cfg, text).unwrap();
    oscillab(&[cmd, cfg.to_str().unwrap()])
}

const ML1D: &str = r#"schema_version = 1
[system]
kind = "ml1d"
lambda = 0.5
alpha = 1.0
[initial]
x = 1.0
v = 0.0
[time]
t1 = 5.0
[integrator]
sample_dt = 0.5
[output]
trajectory = "traj.csv"
report = "report.json"
"#;

#[test]
fn simulate_writes_csv_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), "simulate", ML1D);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("traj.csv")).unwrap();
    assert!(csv.starts_with("t,x,v\n0.0,1.0,0.0\n"));
    assert_eq!(csv.lines().count(), 12);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    let entry = &report["invariants"][0];
    for key in ["invariant", "initial", "max_abs_drift", "max_rel_drift"] {
        assert!(!entry[key].is_null(), "missing {key}");
    }
    assert_eq!(entry["invariant"], "E");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), "simulate", ML1D);
    let first = fs::read(dir.path().join("traj.csv")).unwrap();
    let first_report = fs::read(dir.path().join("report.json")).unwrap();
    run_in(dir.path(), "simulate", ML1D);
    assert_eq!(first, fs::read(dir.path().join("traj.csv")).unwrap());
    assert_eq!(first_report, fs::read(dir.path().join("report.json")).unwrap());
}

#[test]
fn config_errors_exit_2_without_outputs() {
    let cases = [
        ML1D.replace("t1 = 5.0", "t1 = 5.0\nt3 = 1.0"),
        ML1D.replace("schema_version = 1", "schema_version = 7"),
        ML1D.replace("x = 1.0", "x = \"one\""),
        ML1D.replace("lambda = 0.5", "lambda = -4.0"),
        "not toml at all [".to_string(),
    ];
    for text in cases {
        let dir = tempfile::tempdir().unwrap();
        let out = run_in(dir.path(), "simulate", &text);
        assert_eq!(out.status.code(), Some(2), "{text}");
        assert!(!out.stderr.is_empty());
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1, "outputs written for {text}");
    }
    assert_eq!(oscillab(&["simulate", "/nonexistent/cfg.toml"]).status.code(), Some(2));
    assert_eq!(oscillab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn integration_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), "simulate", &ML1D.replace("sample_dt = 0.5", "max_steps = 2"));
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn spectrum_report_keys() {
    let dir = tempfile::tempdir().unwrap();
    let text = "schema_version = 1\nlambda = 1.0\nbeta = 3.0\nn_levels = 5\n[grid]\nn_points = 1000\n[output]\nreport = \"s.json\"\n";
    let out = run_in(dir.path(), "spectrum", text);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("s.json")).unwrap()).unwrap();
    for key in ["ladder", "numeric", "abs_diff", "bound_states", "threshold"] {
        assert!(!doc[key].is_null(), "missing {key}");
    }
    assert_eq!(doc["bound_states"], 3);
    assert_eq!(doc["ladder"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_single_suite_and_seed() {
    let a = oscillab(&["verify", "identities", "--seed", "7"]);
    let b = oscillab(&["verify", "identities", "--seed", "7", "--jobs", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stdout).lines().any(|l| l.starts_with("PASS")));
}

#[test]
fn shipped_scenarios_run() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(&root).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("toml") {
            continue;
        }
        let text = fs::read_to_string(&path).unwrap().replace("out/", "");
        let cmd = if text.contains("n_levels") { "spectrum" } else { "simulate" };
        let out = run_in(dir.path(), cmd, &text);
        assert_eq!(out.status.code(), Some(0), "{}: {}", path.display(), String::from_utf8_lossy(&out.stderr));
    }
}
