//! Exit codes, flag validation and emission behavior of the `shg` binary.

use std::process::{Command, Output};

use shg_core::sweep::SweepTable;

fn shg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn marginal_point_exits_with_domain_error() {
    let out = shg(&["spectrum", "--m", "2.5", "--fraction", "1.0"]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.lines().count() == 1, "one-line diagnostic, got: {err}");
    assert!(err.starts_with("error: instability:"), "got: {err}");
}

#[test]
fn mixed_unit_systems_exit_with_usage_error() {
    let out = shg(&["spectrum", "--m", "2.5", "--gamma-c", "1.0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error: usage:"));

    let out = shg(&[
        "stability",
        "--m",
        "2.5",
        "--eta",
        "1.0",
        "--fraction",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flags_exit_with_usage_error() {
    let out = shg(&["fig1", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_parameters_exit_with_domain_error() {
    let out = shg(&[
        "steady-state",
        "--gamma-c",
        "-1.0",
        "--mu",
        "1.0",
        "--alpha-in",
        "1.0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error: parameter:"));
}

#[test]
fn single_row_spectrum_matches_anchor() {
    let out = shg(&[
        "spectrum",
        "--m",
        "2.5",
        "--eta",
        "1.75",
        "--omega-max",
        "0",
    ]);
    assert!(out.status.success());
    let table = SweepTable::from_csv_str(&stdout(&out)).unwrap();
    assert_eq!(table.rows.len(), 1);
    let s_minus = table.rows[0][table.column_index("s_minus").unwrap()];
    assert!((s_minus - 0.19095776323616898).abs() < 1e-12);
}

#[test]
fn csv_and_json_emissions_carry_identical_values() {
    let args = [
        "spectrum",
        "--m",
        "2.5",
        "--eta",
        "1.75",
        "--omega-max",
        "5",
        "--omega-steps",
        "10",
    ];
    let csv = stdout(&shg(&args));
    let json = stdout(&shg(&[&args[..], &["--format", "json"]].concat()));
    let from_csv = SweepTable::from_csv_str(&csv).unwrap();
    let from_json = SweepTable::from_json_str(&json).unwrap();
    assert_eq!(from_csv.rows, from_json.rows);
    assert_eq!(from_csv.metadata, from_json.metadata);
}

#[test]
fn physical_entry_reaches_the_same_point_as_scaled_entry() {
    // gamma = mu = 1, n = 2.5, beta = 0.875 realizes (m, eta) = (2.5, 1.75);
    // the required pump is |alpha|(gamma + mu n + 2 sqrt(mu) beta)/sqrt(2)
    let pump = format!("{}", 2.5f64.sqrt() * (1.0 + 2.5 + 1.75) / 2.0f64.sqrt());
    let physical = stdout(&shg(&[
        "stability",
        "--gamma-c",
        "1",
        "--gamma-s",
        "0",
        "--mu",
        "1",
        "--alpha-in",
        &pump,
        "--beta-in",
        "0.875",
    ]));
    let scaled = stdout(&shg(&["stability", "--m", "2.5", "--eta", "1.75"]));
    let get = |text: &str, key: &str| -> f64 {
        text.lines()
            .find(|l| l.starts_with(key))
            .unwrap()
            .split('=')
            .nth(1)
            .unwrap()
            .trim()
            .parse()
            .unwrap()
    };
    for key in ["lambda_minus", "lambda_plus", "fraction", "margin"] {
        let a = get(&physical, key);
        let b = get(&scaled, key);
        assert!(
            (a - b).abs() <= 1e-9 * b.abs().max(1.0),
            "{key}: {a} vs {b}"
        );
    }
}

#[test]
fn output_flag_writes_file_and_env_var_redirects() {
    let dir = std::env::temp_dir().join(format!("shg-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();

    let direct = dir.join("direct.csv");
    let out = shg(&[
        "fig1",
        "--m-max",
        "2",
        "--m-steps",
        "4",
        "--output",
        direct.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let table = SweepTable::from_csv_str(&std::fs::read_to_string(&direct).unwrap()).unwrap();
    assert_eq!(table.rows.len(), 5);

    let out = Command::new(env!("CARGO_BIN_EXE_shg"))
        .args([
            "fig1",
            "--m-max",
            "2",
            "--m-steps",
            "4",
            "--output",
            "redirected.csv",
        ])
        .env("SHG_OUTPUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.join("redirected.csv").exists());

    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn oracle_check_reports_and_respects_tolerance() {
    let out = shg(&["oracle-check", "--points", "100", "--seed", "7"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("max_relative_error"));

    // an absurd tolerance turns the same run into a failure
    let out = shg(&[
        "oracle-check",
        "--points",
        "10",
        "--seed",
        "7",
        "--tolerance",
        "1e-30",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error: tolerance:"));
}

#[test]
fn steady_state_json_is_well_formed() {
    let out = shg(&[
        "steady-state",
        "--gamma-c",
        "1",
        "--mu",
        "1",
        "--alpha-in",
        "1.4142135623730951",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.trim_start().starts_with('{') && text.trim_end().ends_with('}'));
    assert!(text.contains("\"alpha_amp\""));
    assert!(text.contains("\"stable\": true"));
}
