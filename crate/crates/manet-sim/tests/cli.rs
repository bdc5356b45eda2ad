//! End-to-end checks of the binary surface: subcommands, flags, output
//! files and exit codes (0 success, 1 usage/parse error, 2 runtime
//! failure).

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use manet_sim::trace::TraceLog;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_manet-sim"))
}

fn scenario_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(name)
}

fn tmp(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn run_ok(cmd: &mut Command) -> Output {
    let out = cmd.output().expect("binary runs");
    assert!(
        out.status.success(),
        "expected success, got {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

#[test]
fn validate_accepts_bundled_scenarios() {
    for name in ["paper-5node.json", "static-grid.json"] {
        let out = run_ok(
            bin()
                .args(["validate", "--scenario"])
                .arg(scenario_path(name)),
        );
        assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok:"));
    }
}

#[test]
fn validate_rejects_missing_file_with_usage_exit() {
    let out = bin()
        .args(["validate", "--scenario", "/no/such/scenario.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn run_writes_trace_metrics_and_distances() {
    let trace_path = tmp("cli-run-trace.tsv");
    let metrics_path = tmp("cli-run-metrics.txt");
    let dist_path = tmp("cli-run-dist.csv");
    run_ok(
        bin()
            .args(["run", "--scenario"])
            .arg(scenario_path("paper-5node.json"))
            .arg("--out-trace")
            .arg(&trace_path)
            .arg("--out-metrics")
            .arg(&metrics_path)
            .arg("--out-distances")
            .arg(&dist_path),
    );

    let trace_text = std::fs::read_to_string(&trace_path).unwrap();
    let log = TraceLog::parse_text(&trace_text).expect("trace parses back");
    assert!(log.len() > 100);
    // Strictly time-sorted on disk.
    for pair in log.records().windows(2) {
        assert!(pair[0].time <= pair[1].time);
    }

    let metrics_text = std::fs::read_to_string(&metrics_path).unwrap();
    assert!(metrics_text.contains("delivery_ratio="));

    let dist_text = std::fs::read_to_string(&dist_path).unwrap();
    assert!(dist_text.starts_with("time,node,ref,distance_m\n"));
    assert!(dist_text.lines().count() > 60);
}

#[test]
fn repeated_runs_write_identical_bytes() {
    let a = tmp("cli-det-a.tsv");
    let b = tmp("cli-det-b.tsv");
    for path in [&a, &b] {
        run_ok(
            bin()
                .args(["run", "--seed", "42", "--scenario"])
                .arg(scenario_path("paper-5node.json"))
                .arg("--out-trace")
                .arg(path)
                .arg("--out-metrics")
                .arg(tmp("cli-det-m.txt")),
        );
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn until_flag_truncates_the_run() {
    let trace_path = tmp("cli-until.tsv");
    run_ok(
        bin()
            .args(["run", "--until", "20", "--scenario"])
            .arg(scenario_path("paper-5node.json"))
            .arg("--out-trace")
            .arg(&trace_path)
            .arg("--out-metrics")
            .arg(tmp("cli-until-m.txt")),
    );
    let text = std::fs::read_to_string(&trace_path).unwrap();
    let log = TraceLog::parse_text(&text).unwrap();
    let limit = manet_sim::SimTime::from_secs_f64(20.0);
    assert!(log.records().iter().all(|r| r.time <= limit));
}

#[test]
fn metrics_subcommand_recomputes_from_trace() {
    let trace_path = tmp("cli-metrics-trace.tsv");
    let first = run_ok(
        bin()
            .args(["run", "--scenario"])
            .arg(scenario_path("static-grid.json"))
            .arg("--out-trace")
            .arg(&trace_path),
    );
    let recomputed = run_ok(bin().args(["metrics", "--trace"]).arg(&trace_path));
    assert_eq!(first.stdout, recomputed.stdout);
}

#[test]
fn metrics_subcommand_names_bad_lines() {
    let bad = tmp("cli-bad-trace.tsv");
    std::fs::write(&bad, "1.000000\tHELLO\t0\tseq=0\nbogus line\n").unwrap();
    let out = bin()
        .args(["metrics", "--trace"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn sweep_emits_rows_and_aggregates() {
    let out = run_ok(
        bin()
            .args(["sweep", "--seeds", "1..3", "--scenario"])
            .arg(scenario_path("static-grid.json")),
    );
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("seed\t"));
    assert_eq!(
        text.lines().filter(|l| !l.starts_with(['s', '#'])).count(),
        3
    );
    assert!(text.contains("# delivery_ratio: mean="));
}

#[test]
fn distances_subcommand_emits_csv() {
    let out = run_ok(
        bin()
            .args([
                "distances",
                "--ref-node",
                "4",
                "--sample-dt",
                "2.0",
                "--scenario",
            ])
            .arg(scenario_path("paper-5node.json")),
    );
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("time,node,ref,distance_m\n"));
    // 31 samples (0..=60 step 2) x 4 non-reference nodes.
    assert_eq!(text.lines().count(), 1 + 31 * 4);
}

#[test]
fn unwritable_output_path_is_a_runtime_failure() {
    let out = bin()
        .args(["run", "--scenario"])
        .arg(scenario_path("static-grid.json"))
        .args(["--out-trace", "/nonexistent-dir/deep/trace.tsv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot write"));
}

#[test]
fn seed_override_changes_the_run_metrics_header_not_determinism() {
    let out1 = run_ok(
        bin()
            .args(["run", "--seed", "7", "--scenario"])
            .arg(scenario_path("static-grid.json")),
    );
    let out2 = run_ok(
        bin()
            .args(["run", "--seed", "7", "--scenario"])
            .arg(scenario_path("static-grid.json")),
    );
    assert_eq!(out1.stdout, out2.stdout);
}
