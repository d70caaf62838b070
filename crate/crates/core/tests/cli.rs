//! End-to-end tests of the `fwlcheck` binary: verdict strings are byte-exact,
//! exit codes follow the 0/1/2 protocol, counterexample files land where
//! requested and replay as confirmed, and diagnostics stay on stderr.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fwlcheck"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

/// Runs `replay` on a counterexample file and asserts it confirms.
fn assert_replay_confirms(ce: &Path) {
    let out = run(&["replay", ce.to_str().unwrap()]);
    assert_eq!(stdout(&out), "REPLAY CONFIRMED\n", "stderr: {}", stderr(&out));
    assert_eq!(code(&out), 0);
}

#[test]
fn stability_at_a_wide_fraction_succeeds() {
    let benchmark = data("benchmark.json");
    let out = run(&[
        "verify-stability",
        "--system",
        benchmark.to_str().unwrap(),
        "--intbits",
        "2",
        "--fracbits",
        "13",
        "--max",
        "1",
        "--min",
        "-1",
    ]);
    assert_eq!(stdout(&out), "VERIFICATION SUCCESSFUL\n");
    assert_eq!(code(&out), 0);
}

#[test]
fn stability_at_a_coarse_fraction_fails_with_replayable_evidence() {
    let tmp = tempfile::tempdir().unwrap();
    let ce = tmp.path().join("ce.json");
    let benchmark = data("benchmark.json");
    let out = run(&[
        "verify-stability",
        "--system",
        benchmark.to_str().unwrap(),
        "--intbits",
        "12",
        "--fracbits",
        "3",
        "--max",
        "1",
        "--min",
        "-1",
        "--ce-out",
        ce.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&out), "VERIFICATION FAILED\n");
    assert_eq!(code(&out), 1);
    let err = stderr(&out);
    assert!(
        err.contains(&format!("counterexample written to {}", ce.display())),
        "stderr: {err}"
    );

    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&ce).unwrap()).unwrap();
    assert_eq!(doc["schema"], "fwl-ce/1");
    assert_eq!(doc["property"], "stability");
    assert_eq!(doc["violation"]["kind"], "unstable_root");
    // The embedded system is the user's document verbatim, not a normalized copy.
    assert_eq!(doc["system"]["type"], "tf");
    assert_eq!(doc["system"]["den"][3], -0.06068);
    // The offending pole is the dominant root of the coarsely quantized
    // denominator.
    let re = doc["violation"]["witness"]["re"].as_f64().unwrap();
    assert!((re - 1.3090169943749475).abs() < 1e-6, "witness re = {re}");

    assert_replay_confirms(&ce);
}

#[test]
fn replay_refutes_a_tampered_counterexample() {
    let tmp = tempfile::tempdir().unwrap();
    let ce = tmp.path().join("ce.json");
    let benchmark = data("benchmark.json");
    run(&[
        "verify-stability",
        "--system",
        benchmark.to_str().unwrap(),
        "--intbits",
        "12",
        "--fracbits",
        "3",
        "--max",
        "1",
        "--min",
        "-1",
        "--ce-out",
        ce.to_str().unwrap(),
    ]);
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&ce).unwrap()).unwrap();
    doc["violation"]["witness"]["re"] = serde_json::json!(1.01);
    std::fs::write(&ce, serde_json::to_string(&doc).unwrap()).unwrap();

    let out = run(&["replay", ce.to_str().unwrap()]);
    assert_eq!(stdout(&out), "REPLAY REFUTED\n");
    assert_eq!(code(&out), 1);
}

#[test]
fn replay_rejects_malformed_input_as_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = run(&["replay", bad.to_str().unwrap()]);
    assert_eq!(stdout(&out), "");
    assert_eq!(code(&out), 2);
}

#[test]
fn missing_required_flags_are_usage_errors() {
    let benchmark = data("benchmark.json");
    let benchmark = benchmark.to_str().unwrap();
    // --bound is required for the bounded rows.
    let out = run(&[
        "verify-overflow",
        "--system",
        benchmark,
        "--intbits",
        "2",
        "--fracbits",
        "4",
        "--max",
        "1",
        "--min",
        "-1",
    ]);
    assert_eq!(stdout(&out), "");
    assert_eq!(code(&out), 2);
    // --min/--max are required on the transfer-function rows.
    let out = run(&[
        "verify-stability",
        "--system",
        benchmark,
        "--intbits",
        "2",
        "--fracbits",
        "13",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn unreadable_system_file_is_a_usage_error() {
    let out = run(&[
        "verify-stability",
        "--system",
        "/nonexistent/sys.json",
        "--intbits",
        "2",
        "--fracbits",
        "13",
        "--max",
        "1",
        "--min",
        "-1",
    ]);
    assert_eq!(stdout(&out), "");
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("/nonexistent/sys.json"));
}

#[test]
fn wrong_system_kind_is_a_usage_error() {
    let ss = data("ss.json");
    let out = run(&[
        "verify-stability",
        "--system",
        ss.to_str().unwrap(),
        "--intbits",
        "2",
        "--fracbits",
        "13",
        "--max",
        "1",
        "--min",
        "-1",
    ]);
    assert_eq!(stdout(&out), "");
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("does not apply"), "stderr: {}", stderr(&out));
}

#[test]
fn oversized_exhaustive_spaces_fall_back_to_random_sampling() {
    let tmp = tempfile::tempdir().unwrap();
    let ce = tmp.path().join("ce.json");
    let benchmark = data("benchmark.json");
    let out = run(&[
        "verify-overflow",
        "--system",
        benchmark.to_str().unwrap(),
        "--intbits",
        "2",
        "--fracbits",
        "13",
        "--max",
        "1",
        "--min",
        "-1",
        "--bound",
        "4",
        "--ce-out",
        ce.to_str().unwrap(),
    ]);
    let err = stderr(&out);
    assert!(
        err.contains("falling back to random sampling"),
        "stderr: {err}"
    );
    // The wrapped numerator coefficients overflow the accumulators almost
    // immediately, so seeded sampling finds a witness.
    assert_eq!(stdout(&out), "VERIFICATION FAILED\n");
    assert_eq!(code(&out), 1);
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&ce).unwrap()).unwrap();
    assert_eq!(doc["engine"]["mode"], "random");
    assert_eq!(doc["engine"]["seed"], 1);
    assert_replay_confirms(&ce);
}

#[test]
fn limit_cycle_failures_replay() {
    let tmp = tempfile::tempdir().unwrap();
    let ce = tmp.path().join("ce.json");
    let lc = data("lc.json");
    let out = run(&[
        "verify-limit-cycle",
        "--system",
        lc.to_str().unwrap(),
        "--intbits",
        "2",
        "--fracbits",
        "4",
        "--max",
        "1",
        "--min",
        "-1",
        "--bound",
        "8",
        "--ce-out",
        ce.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&out), "VERIFICATION FAILED\n", "stderr: {}", stderr(&out));
    assert_eq!(code(&out), 1);
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&ce).unwrap()).unwrap();
    assert_eq!(doc["violation"]["kind"], "limit_cycle");
    assert_eq!(doc["violation"]["node"], "state");
    assert_replay_confirms(&ce);
}

#[test]
fn exhaustive_bounded_pass_reports_the_full_space() {
    let tmp = tempfile::tempdir().unwrap();
    let sys = tmp.path().join("gain.json");
    std::fs::write(
        &sys,
        r#"{"type":"tf","num":[0.25],"den":[1.0],"ts":0.001}"#,
    )
    .unwrap();
    let out = run(&[
        "verify-overflow",
        "--system",
        sys.to_str().unwrap(),
        "--intbits",
        "2",
        "--fracbits",
        "4",
        "--max",
        "1",
        "--min",
        "-1",
        "--bound",
        "2",
    ]);
    assert_eq!(stdout(&out), "VERIFICATION SUCCESSFUL\n", "stderr: {}", stderr(&out));
    assert_eq!(code(&out), 0);
    // 33 grid points per step, two steps.
    let err = stderr(&out);
    assert!(err.contains("1089 candidates"), "stderr: {err}");
    assert!(err.contains("exhaustive to bound 2"), "stderr: {err}");
}

#[test]
fn closed_loop_and_state_space_rows_run_end_to_end() {
    let cl = data("cl.json");
    // The <2,2> grid floors the 0.45 gain to 0.25, which no longer
    // stabilizes the 1.3 plant pole.
    let tmp = tempfile::tempdir().unwrap();
    let ce = tmp.path().join("ce.json");
    let out = run(&[
        "verify-closed-stability",
        "--system",
        cl.to_str().unwrap(),
        "--intbits",
        "2",
        "--fracbits",
        "2",
        "--max",
        "1",
        "--min",
        "-1",
        "--ce-out",
        ce.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&out), "VERIFICATION FAILED\n", "stderr: {}", stderr(&out));
    assert_eq!(code(&out), 1);
    assert_replay_confirms(&ce);
    // At <2,13> the gain survives quantization and the loop is stable.
    let out = run(&[
        "verify-closed-stability",
        "--system",
        cl.to_str().unwrap(),
        "--intbits",
        "2",
        "--fracbits",
        "13",
        "--max",
        "1",
        "--min",
        "-1",
    ]);
    assert_eq!(stdout(&out), "VERIFICATION SUCCESSFUL\n");
    assert_eq!(code(&out), 0);

    // State-space rows take the range optionally; omitting it uses the
    // representable range.
    let ss = data("ss.json");
    for cmd in ["verify-ss-stability", "verify-ss-controllability", "verify-ss-observability"] {
        let out = run(&[
            cmd,
            "--system",
            ss.to_str().unwrap(),
            "--intbits",
            "2",
            "--fracbits",
            "4",
        ]);
        assert_eq!(stdout(&out), "VERIFICATION SUCCESSFUL\n", "{cmd} stderr: {}", stderr(&out));
        assert_eq!(code(&out), 0, "{cmd}");
    }
}

#[test]
fn help_lists_every_subcommand() {
    let out = run(&["--help"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for cmd in [
        "verify-stability",
        "verify-minimum-phase",
        "verify-overflow",
        "verify-limit-cycle",
        "verify-error",
        "verify-closed-stability",
        "verify-closed-quantization-error",
        "verify-closed-limit-cycle",
        "verify-ss-stability",
        "verify-ss-controllability",
        "verify-ss-observability",
        "verify-ss-quantization-error",
        "replay",
    ] {
        assert!(text.contains(cmd), "help is missing {cmd}:\n{text}");
    }
}

#[test]
fn default_counterexample_path_is_cwd_relative() {
    let tmp = tempfile::tempdir().unwrap();
    let benchmark = data("benchmark.json");
    let out = bin()
        .current_dir(tmp.path())
        .args([
            "verify-stability",
            "--system",
            benchmark.to_str().unwrap(),
            "--intbits",
            "12",
            "--fracbits",
            "3",
            "--max",
            "1",
            "--min",
            "-1",
        ])
        .output()
        .expect("binary runs");
    assert_eq!(code(&out), 1);
    let ce = tmp.path().join("counterexample.json");
    assert!(ce.exists(), "default --ce-out should land in the working directory");
    assert_replay_confirms(&ce);
}
