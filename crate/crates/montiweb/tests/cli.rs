//! End-to-end tests of the `montiweb` binary: the exit-code contract,
//! output channels, and determinism of scripted runs.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_montiweb"))
}

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn project_args<'a>(project: &'a str, rest: &[&'a str]) -> Vec<String> {
    let mut args = vec!["--project".to_string(), fixture(project).display().to_string()];
    args.extend(rest.iter().map(|s| s.to_string()));
    args
}

fn run_project(project: &str, rest: &[&str]) -> Output {
    bin().args(project_args(project, rest)).output().unwrap()
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

#[test]
fn check_clean_project_exits_zero() {
    let output = run_project("carsharing_fixed", &["check"]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stderr_of(&output).contains("0 error(s), 0 warning(s)"));
}

#[test]
fn check_broken_project_exits_one() {
    let output = run_project("carsharing", &["check"]);
    assert_eq!(output.status.code(), Some(1));
    let stderr = stderr_of(&output);
    assert!(stderr.contains("MW402"), "{stderr}");
    assert!(stderr.contains("Person.registrationError"), "{stderr}");
    assert!(stderr.contains("1 error(s), 0 warning(s)"), "{stderr}");
}

#[test]
fn deny_warnings_escalates_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(
        fixture("carsharing/Carsharing.cd"),
        dir.path().join("Carsharing.cd"),
    )
    .unwrap();
    let project = dir.path().to_str().unwrap();

    let output = run(&["--project", project, "check"]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stderr_of(&output).contains("0 error(s), 1 warning(s)"));

    let output = run(&["--project", project, "check", "--deny-warnings"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn missing_inputs_are_usage_errors() {
    let empty = tempfile::tempdir().unwrap();
    let output = run(&["--project", empty.path().to_str().unwrap(), "check"]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = stderr_of(&output);
    assert!(stderr.starts_with("error: "), "{stderr}");
    assert!(stderr.contains("class-diagram"), "{stderr}");

    let output = run(&["--project", "/no/such/path", "check"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn bad_invocations_are_usage_errors() {
    // No subcommand at all.
    assert_eq!(run(&[]).status.code(), Some(2));

    // A run needs either a script or the interactive flag.
    let output = run_project("carsharing_fixed", &["run", "UserRegistration"]);
    assert_eq!(output.status.code(), Some(2));

    // Trace files only make sense for scripted runs.
    let output = run_project(
        "carsharing_fixed",
        &["run", "UserRegistration", "--interactive", "--trace-out", "t.json"],
    );
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn unknown_activity_is_a_usage_error() {
    let script = fixture("scripts/age18.json");
    let output = run_project(
        "carsharing_fixed",
        &["run", "Nope", "--script", script.to_str().unwrap()],
    );
    assert_eq!(output.status.code(), Some(2));
    let stderr = stderr_of(&output);
    assert!(stderr.contains("UserRegistration"), "{stderr}");
}

#[test]
fn unreadable_or_malformed_scripts_are_usage_errors() {
    let output = run_project(
        "carsharing_fixed",
        &["run", "UserRegistration", "--script", "/no/such/script.json"],
    );
    assert_eq!(output.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "not json").unwrap();
    let output = run_project(
        "carsharing_fixed",
        &["run", "UserRegistration", "--script", bad.to_str().unwrap()],
    );
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).starts_with("error: "));
}

#[test]
fn generate_refuses_a_broken_model() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("site");
    let output = run_project("carsharing", &["generate", "--out", out.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    assert!(!out.exists(), "a refused generation must write nothing");
}

#[test]
fn generate_io_failure_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let blocked = dir.path().join("blocked");
    fs::write(&blocked, "in the way").unwrap();
    let output = run_project(
        "carsharing_fixed",
        &["generate", "--out", blocked.to_str().unwrap()],
    );
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).contains("MW602"));
}

#[test]
fn generate_uses_the_manifest_out_dir_and_prints_the_manifest() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["Carsharing.cd", "Person.cv", "UserRegistration.ad", "montiweb.json"] {
        fs::copy(
            fixture("carsharing_fixed").join(name),
            dir.path().join(name),
        )
        .unwrap();
    }
    let output = run(&["--project", dir.path().to_str().unwrap(), "generate"]);
    assert_eq!(output.status.code(), Some(0));

    let out = dir.path().join("out");
    let manifest = fs::read_to_string(out.join("manifest.json")).unwrap();
    assert_eq!(stdout_of(&output), manifest);
    for page in [
        "pages/Person.registration.html",
        "pages/Person.welcome.html",
        "schema.json",
        "flow.json",
        "static/mw.css",
    ] {
        assert!(out.join(page).is_file(), "missing {page}");
    }
}

#[test]
fn scripted_runs_are_deterministic_and_honor_trace_out() {
    let script = fixture("scripts/age18.json");
    let args = [
        "run",
        "UserRegistration",
        "--script",
        script.to_str().unwrap(),
    ];
    let first = run_project("carsharing_fixed", &args);
    let second = run_project("carsharing_fixed", &args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout, "traces must be byte-identical");

    let dir = tempfile::tempdir().unwrap();
    let trace_path = dir.path().join("trace.jsonl");
    let output = run_project(
        "carsharing_fixed",
        &[
            "run",
            "UserRegistration",
            "--script",
            script.to_str().unwrap(),
            "--trace-out",
            trace_path.to_str().unwrap(),
        ],
    );
    assert_eq!(output.status.code(), Some(0));
    assert!(output.stdout.is_empty(), "the trace goes to the file instead");
    assert_eq!(fs::read(&trace_path).unwrap(), first.stdout);
}

#[test]
fn run_resolves_the_default_activity_from_the_manifest() {
    let script = fixture("scripts/age17.json");
    let output = run_project(
        "carsharing_fixed",
        &["run", "--script", script.to_str().unwrap()],
    );
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout_of(&output).contains(r#""to":"Error""#));
}

#[test]
fn guard_gap_fails_the_run_with_exit_three() {
    let script = fixture("scripts/age18.json");
    let output = run_project(
        "guard_gap",
        &["run", "UserRegistration", "--script", script.to_str().unwrap()],
    );
    assert_eq!(output.status.code(), Some(3));
    assert!(stderr_of(&output).contains("MW505"));
    // The partial trace still lands on stdout.
    assert!(stdout_of(&output).contains(r#""event":"GuardEvaluated""#));
}

fn interactive(project: &str, input: &str) -> Output {
    let mut child = bin()
        .args(project_args(project, &["run", "UserRegistration", "--interactive"]))
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

#[test]
fn interactive_session_completes_over_piped_stdin() {
    let output = interactive(
        "carsharing_fixed",
        "Ann\nann@example.com\n18\n0\n0\n",
    );
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let stdout = stdout_of(&output);
    assert!(stdout.contains("== Person.registration"), "{stdout}");
    assert!(stdout.contains("captcha challenge: 0"), "{stdout}");
    assert!(stdout.contains("== Person.welcome"), "{stdout}");
    assert!(stdout.contains("flow completed"), "{stdout}");
}

#[test]
fn interactive_rejection_reprompts_in_place() {
    // First attempt uses a two-letter name, second fixes it.
    let output = interactive(
        "carsharing_fixed",
        "ab\nann@example.com\n18\n0\n0\nAnn\nann@example.com\n18\n0\n0\n",
    );
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let stdout = stdout_of(&output);
    assert!(stdout.contains("rejected: "), "{stdout}");
    assert!(stdout.contains("flow completed"), "{stdout}");
}

#[test]
fn interactive_eof_is_a_usage_error() {
    let output = interactive("carsharing_fixed", "Ann\n");
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).contains("input ended"));
}

#[test]
fn piped_diagnostics_stay_plain() {
    let output = run_project("carsharing", &["check"]);
    assert!(
        !stderr_of(&output).contains('\u{1b}'),
        "no ANSI escapes when stderr is not a terminal"
    );

    let output = bin()
        .args(project_args("carsharing", &["check"]))
        .env("MW_NO_COLOR", "1")
        .output()
        .unwrap();
    assert!(!stderr_of(&output).contains('\u{1b}'));
}
