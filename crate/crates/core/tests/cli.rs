//! End-to-end tests of the `histoshep` binary: file formats, exit codes,
//! output determinism, and the JSON inspection surface.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_histoshep"))
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("histoshep-cli-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Piecewise-constant integral data on `n` equispaced segments over [0, 1]:
/// value 1 left of the jump, 3 right of it, with the straddling segment split
/// exactly. Returns (nodes, integrals).
fn step_data(n: usize, jump: f64) -> (Vec<f64>, Vec<f64>) {
    let nodes: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
    let integrals = (0..n)
        .map(|i| {
            let (a, b) = (nodes[i], nodes[i + 1]);
            if b <= jump {
                b - a
            } else if a >= jump {
                3.0 * (b - a)
            } else {
                (jump - a) + 3.0 * (b - jump)
            }
        })
        .collect();
    (nodes, integrals)
}

fn write_json(path: &Path, nodes: &[f64], integrals: &[f64], jumps: &[f64]) {
    let doc = serde_json::json!({ "nodes": nodes, "integrals": integrals, "jumps": jumps });
    fs::write(path, serde_json::to_string(&doc).unwrap()).unwrap();
}

fn write_csv(path: &Path, nodes: &[f64], integrals: &[f64]) {
    fs::write(path, histoshep::io::to_csv(nodes, integrals)).unwrap();
}

#[test]
fn approximate_writes_requested_rows_and_report() {
    let dir = tmp_dir("approx");
    let input = dir.join("step.json");
    let (nodes, integrals) = step_data(13, 0.505);
    write_json(&input, &nodes, &integrals, &[0.505]);

    let out_csv = dir.join("q.csv");
    let status = bin()
        .args(["approximate"])
        .arg(&input)
        .args([
            "--d", "3", "--K", "8", "--mu", "4", "--ne", "11", "--report", "--out",
        ])
        .arg(&out_csv)
        .output()
        .unwrap();
    assert!(status.status.success(), "stderr: {}", stderr_of(&status));

    let csv = fs::read_to_string(&out_csv).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "x,Q");
    assert_eq!(lines.len(), 12, "header + 11 evaluation rows");

    // Far from the jump the step values are reproduced.
    let row = |idx: usize| -> (f64, f64) {
        let mut it = lines[idx].split(',');
        (
            it.next().unwrap().parse().unwrap(),
            it.next().unwrap().parse().unwrap(),
        )
    };
    let (x1, q1) = row(2); // x = 0.1
    assert!((x1 - 0.1).abs() < 1e-12);
    assert!((q1 - 1.0).abs() < 1e-9, "Q(0.1) = {q1}");
    let (x9, q9) = row(10); // x = 0.9
    assert!((x9 - 0.9).abs() < 1e-12);
    assert!((q9 - 3.0).abs() < 1e-9, "Q(0.9) = {q9}");

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("q.report.json")).unwrap()).unwrap();
    assert_eq!(report["d"], 3);
    assert_eq!(report["k"], 8);
    assert_eq!(report["n_jumps"], 1);
    assert!(report["max_residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn infeasible_degree_exits_3_and_names_d_max() {
    let dir = tmp_dir("dmax");
    let input = dir.join("step.json");
    let (nodes, integrals) = step_data(13, 0.505);
    write_json(&input, &nodes, &integrals, &[0.505]);

    let out = bin()
        .arg("approximate")
        .arg(&input)
        .args(["--d", "50"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = stderr_of(&out);
    assert!(err.contains("d_max = 5"), "stderr: {err}");
}

#[test]
fn malformed_csv_exits_2_with_row_number() {
    let dir = tmp_dir("badrow");
    let input = dir.join("bad.csv");
    fs::write(&input, "left,right,integral\n0,0.5,1\n0.5,zebra,1\n").unwrap();

    let out = bin().arg("approximate").arg(&input).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("line 3"), "stderr: {err}");
}

#[test]
fn info_reports_uniform_radius_and_max_degree() {
    let dir = tmp_dir("info");
    let input = dir.join("uniform.csv");
    let nodes: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    let integrals = vec![0.1; 10];
    write_csv(&input, &nodes, &integrals);

    let out = bin()
        .arg("info")
        .arg(&input)
        .args(["--d", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((doc["r_d"].as_f64().unwrap() - 0.4).abs() < 1e-12);
    assert_eq!(doc["d_max"], 9);
    assert_eq!(doc["metrics"]["admissible"], true);
    assert_eq!(doc["n_segments"], 10);
    assert_eq!(doc["intervals"].as_array().unwrap().len(), 1);
}

#[test]
fn info_on_inadmissible_grid_still_exits_0() {
    let dir = tmp_dir("inadm");
    let input = dir.join("skewed.json");
    // One wide jump-free segment next to a narrow continuity interval.
    let nodes = [0.0, 0.4, 0.41, 0.42, 1.0];
    let integrals = [0.4, 0.01, 0.01, 0.58];
    write_json(&input, &nodes, &integrals, &[0.405]);

    let out = bin().arg("info").arg(&input).output().unwrap();
    assert!(out.status.success(), "info is diagnostic, must exit 0");
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["metrics"]["admissible"], false);
    assert_eq!(doc["d_max"], serde_json::Value::Null);
    assert!(doc["infeasible_reason"].as_str().is_some());
}

#[test]
fn weights_partition_and_dominance_on_two_windows() {
    let dir = tmp_dir("weights");
    let input = dir.join("step.csv");
    let (nodes, integrals) = step_data(13, 0.505);
    write_csv(&input, &nodes, &integrals);

    // d = 5 makes each continuity side exactly one 6-segment window: M = 2.
    let out = bin()
        .arg("weights")
        .arg(&input)
        .args(["--jumps", "0.505", "--d", "5", "--K", "10", "--ne", "21"])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,W_1,W_2");
    assert_eq!(lines.len(), 22);
    for line in &lines[1..] {
        let vals: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        let (x, w1, w2) = (vals[0], vals[1], vals[2]);
        assert!(((w1 + w2) - 1.0).abs() <= 1e-12, "sum at x={x}");
        assert!(w1 >= 0.0 && w2 >= 0.0);
        if x <= 0.1 {
            assert!(w1 > 0.999, "left dominance at x={x}: W_1={w1}");
        }
        if x >= 0.9 {
            assert!(w2 > 0.999, "right dominance at x={x}: W_2={w2}");
        }
    }
}

#[test]
fn unknown_experiment_exits_2() {
    let out = bin().args(["bench", "nosuch"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("unknown experiment"));
}

#[test]
fn bench_output_is_bit_identical_across_runs_and_thread_counts() {
    let dir_a = tmp_dir("bench-a");
    let dir_b = tmp_dir("bench-b");
    let run = |dir: &Path, threads: &str| {
        let out = bin()
            .args(["bench", "figure8", "--out"])
            .arg(dir)
            .env("HISTOSHEP_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success(), "stderr: {}", stderr_of(&out));
        fs::read(dir.join("figure8.csv")).unwrap()
    };
    let first = run(&dir_a, "1");
    let second = run(&dir_b, "3");
    assert_eq!(first, second, "experiment CSV must not depend on threading");
    // Rerunning over an existing file atomically replaces it.
    let third = run(&dir_a, "2");
    assert_eq!(first, third);
}

#[test]
fn json_and_csv_inputs_produce_identical_output() {
    let dir = tmp_dir("equiv");
    let (nodes, integrals) = step_data(13, 0.505);
    let json_in = dir.join("in.json");
    let csv_in = dir.join("in.csv");
    write_json(&json_in, &nodes, &integrals, &[0.505]);
    write_csv(&csv_in, &nodes, &integrals);

    let args = ["--d", "3", "--K", "8", "--ne", "31"];
    let from_json = bin()
        .arg("approximate")
        .arg(&json_in)
        .args(args)
        .output()
        .unwrap();
    let from_csv = bin()
        .arg("approximate")
        .arg(&csv_in)
        .args(["--jumps", "0.505"])
        .args(args)
        .output()
        .unwrap();
    assert!(from_json.status.success() && from_csv.status.success());
    assert!(!from_json.stdout.is_empty());
    assert_eq!(from_json.stdout, from_csv.stdout);
}

#[test]
fn invalid_thread_cap_exits_2() {
    let out = bin()
        .args(["bench", "figure8"])
        .env("HISTOSHEP_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("HISTOSHEP_THREADS"));
}
