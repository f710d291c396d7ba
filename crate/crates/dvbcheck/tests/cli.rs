//! End-to-end tests of the `dvbcheck` binary: exit codes, report formats,
//! seeding, determinism, and the failure cap.

use std::process::{Command, Output};

fn dvbcheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dvbcheck"))
        .args(args)
        .env_remove("DVBCHECK_SEED")
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    serde_json::from_slice(&output.stdout).expect("stdout parses as JSON")
}

#[test]
fn passing_suite_exits_zero_with_full_json_schema() {
    let output = dvbcheck(&[
        "run",
        "--suite",
        "involution",
        "--trials",
        "50",
        "--report",
        "json",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let report = stdout_json(&output);
    assert_eq!(report["suite"], "involution");
    assert_eq!(report["seed"], 42);
    assert_eq!(report["trials"], 50);
    assert_eq!(report["pass"], true);
    assert!(report["max_residual"].is_number());
    assert!(report["tolerance"].is_number());
    assert!(report["wall_ms"].is_number());
    assert!(report["failures"].as_array().expect("failures array").is_empty());
}

#[test]
fn negative_controls_fail_with_exit_one_and_capped_records() {
    let output = dvbcheck(&[
        "run",
        "--suite",
        "poisson-jacobi",
        "--trials",
        "20",
        "--negative-controls",
        "--report",
        "json",
    ]);
    assert_eq!(output.status.code(), Some(1));
    let report = stdout_json(&output);
    assert_eq!(report["pass"], false);
    let failures = report["failures"].as_array().expect("failures array");
    assert!(!failures.is_empty() && failures.len() <= 10);
    for failure in failures {
        let inputs = failure["inputs"].as_str().expect("inputs string");
        assert!(inputs.contains("control"));
        assert!(failure["residual"].as_f64().expect("residual") > 1e-3);
    }
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(dvbcheck(&["run", "--suite", "nonsense"]).status.code(), Some(2));
    let trials_zero = dvbcheck(&["run", "--trials", "0"]);
    assert_eq!(trials_zero.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&trials_zero.stderr).contains("--trials"));
    assert_eq!(dvbcheck(&["run", "--dim-base", "9"]).status.code(), Some(2));
}

#[test]
fn seed_env_variable_is_honored() {
    let output = Command::new(env!("CARGO_BIN_EXE_dvbcheck"))
        .args(["run", "--suite", "interchange", "--trials", "5", "--report", "json"])
        .env("DVBCHECK_SEED", "777")
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(stdout_json(&output)["seed"], 777);
    // An explicit flag overrides the environment.
    let output = Command::new(env!("CARGO_BIN_EXE_dvbcheck"))
        .args(["run", "--suite", "interchange", "--trials", "5", "--seed", "9", "--report", "json"])
        .env("DVBCHECK_SEED", "777")
        .output()
        .expect("binary runs");
    assert_eq!(stdout_json(&output)["seed"], 9);
}

#[test]
fn repeated_runs_are_deterministic_modulo_wall_time() {
    let strip = |output: &Output| -> String {
        String::from_utf8_lossy(&output.stdout)
            .lines()
            .filter(|line| !line.contains("wall_ms"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let args = ["run", "--suite", "all", "--trials", "40", "--report", "json"];
    let first = dvbcheck(&args);
    let second = dvbcheck(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(strip(&first), strip(&second));
    let suites = stdout_json(&first);
    assert_eq!(suites.as_array().expect("array of reports").len(), 10);
}

#[test]
fn text_report_names_the_suite_and_verdict() {
    let output = dvbcheck(&["run", "--suite", "tulczyjew", "--trials", "25"]);
    assert_eq!(output.status.code(), Some(0));
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("[PASS] tulczyjew"));
    assert!(text.contains("max_residual="));
    assert!(text.contains("seed=42"));
}
