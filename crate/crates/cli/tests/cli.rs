//! End-to-end checks of the binary: exit codes, stdin input, golden
//! reports for the worked examples, and the structured round trip.

use std::io::Write;
use std::process::{Command, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bispectral"))
}

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).expect("golden file")
}

fn run_on_stdin(args: &[&str], input: &str) -> (String, String, Option<i32>) {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    let out = child.wait_with_output().expect("wait");
    (
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
        out.status.code(),
    )
}

#[test]
fn golden_reports_match() {
    for (mode, problem, report) in [
        ("construct", "problem_construct_r2_n1.json", "construct_r2_n1.json"),
        ("construct", "problem_construct_r3_n1.json", "construct_r3_n1.json"),
        ("ring", "problem_ring_r2_origin.json", "ring_r2_origin.json"),
        ("involute", "problem_involute_r2.json", "involute_r2.json"),
    ] {
        let (stdout, stderr, code) =
            run_on_stdin(&[mode, "-", "--format", "structured"], &golden(problem));
        assert_eq!(code, Some(0), "{mode} on {problem}: {stderr}");
        assert_eq!(stdout, golden(report), "{mode} on {problem} drifted");
    }
}

#[test]
fn text_format_prints_operators() {
    let (stdout, _, code) = run_on_stdin(
        &["construct", "-"],
        &golden("problem_construct_r2_n1.json"),
    );
    assert_eq!(code, Some(0));
    assert!(stdout.contains("tau       = x - 1"), "{stdout}");
    assert!(stdout.contains("kbar"));
}

#[test]
fn verify_all_exits_zero() {
    let (_, stderr, code) = run_on_stdin(
        &["verify-all", "-"],
        &golden("problem_construct_r2_n1.json"),
    );
    assert_eq!(code, Some(0), "{stderr}");
}

#[test]
fn malformed_input_exits_two() {
    for bad in [
        "not json",
        r#"{"r": 1, "cusps": []}"#,
        r#"{"r": 2, "cusps": [{"lambda": "0", "gamma": "1"},
                              {"lambda": "0", "gamma": "2"}]}"#,
        r#"{"r": 2, "cusps": [{"lambda": "1/0", "gamma": "0"}]}"#,
    ] {
        let (_, _, code) = run_on_stdin(&["construct", "-"], bad);
        assert_eq!(code, Some(2), "input {bad:?}");
    }
}

#[test]
fn failed_stage_exits_one() {
    // a truncation too small for the series oracle is a recorded stage
    // failure, so verify-all must not report success
    let problem = r#"{"r": 2,
                      "cusps": [{"lambda": "0", "gamma": "1"},
                                {"lambda": "1", "gamma": "0"}],
                      "series_truncation": 8}"#;
    let (stdout, _, code) = run_on_stdin(&["verify-all", "-"], problem);
    assert_eq!(code, Some(1), "{stdout}");
    assert!(stdout.contains("[error] verify-series"), "{stdout}");
}

#[test]
fn missing_file_exits_two() {
    let out = bin()
        .args(["construct", "/nonexistent/problem.json"])
        .output()
        .expect("run");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn structured_output_round_trips() {
    let (stdout, _, code) = run_on_stdin(
        &["verify-all", "-", "--format", "structured"],
        &golden("problem_construct_r2_n1.json"),
    );
    assert_eq!(code, Some(0));
    let report = bispectral::report::parse_report(&stdout).expect("parses back");
    assert!(report.all_pass());
    assert_eq!(
        bispectral::report::emit_report(&report, bispectral::report::Format::Structured),
        stdout
    );
}

#[test]
fn flag_overrides_apply() {
    let (stdout, _, code) = run_on_stdin(
        &[
            "ring",
            "-",
            "--degree-bound",
            "3",
            "--format",
            "structured",
        ],
        &golden("problem_construct_r2_n1.json"),
    );
    assert_eq!(code, Some(0));
    let report = bispectral::report::parse_report(&stdout).unwrap();
    assert_eq!(report.degree_bound, 3);
}
