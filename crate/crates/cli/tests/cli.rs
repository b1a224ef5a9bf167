use std::path::Path;
use std::process::{Command, Output};

use emission_core::csv::read_table;
use emission_core::*;

fn emission(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_emission"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn emission_stdin(args: &[&str], input: &str) -> Output {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_emission"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn ok_stdout(args: &[&str]) -> String {
    let out = emission(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn columns(csv: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    read_table(csv).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn two_level_matches_cos_squared() {
    let csv = ok_stdout(&[
        "two-level",
        "--alpha",
        "1",
        "--t-max",
        "6.2832",
        "--samples",
        "1000",
    ]);
    assert!(csv.starts_with("t,P,P_analytic\n"));
    assert!(!csv.contains('\r'));
    let (_, rows) = columns(&csv);
    assert_eq!(rows.len(), 1000);
    for r in &rows {
        assert!((r[1] - r[0].cos().powi(2)).abs() < 1e-10, "{r:?}");
        assert!((r[1] - r[2]).abs() < 1e-10);
    }
}

#[test]
fn two_level_zero_coupling_is_constant() {
    let (_, rows) = columns(&ok_stdout(&["two-level", "--alpha", "0"]));
    assert!(rows.iter().all(|r| r[1] == 1.0 && r[2] == 1.0));
}

#[test]
fn two_level_detuned_minimum() {
    let csv = ok_stdout(&[
        "two-level",
        "--eps1",
        "2",
        "--alpha",
        "1",
        "--samples",
        "20001",
    ]);
    let (_, rows) = columns(&csv);
    let min = rows.iter().map(|r| r[1]).fold(1.0, f64::min);
    assert!((min - 0.5).abs() < 1e-4, "{min}");
    assert!(rows.iter().all(|r| (r[1] - r[2]).abs() < 1e-10));
}

#[test]
fn hbar_rescales_display_time_only() {
    let csv = ok_stdout(&[
        "two-level",
        "--hbar",
        "2",
        "--t-max",
        "10",
        "--samples",
        "101",
    ]);
    let (_, rows) = columns(&csv);
    assert_eq!(rows.last().unwrap()[0], 10.0);
    for r in &rows {
        assert!((r[1] - (r[0] / 2.0).cos().powi(2)).abs() < 1e-10);
    }
}

#[test]
fn identical_modes_examples() {
    let (_, rows) = columns(&ok_stdout(&["identical-modes", "--n", "4", "--alpha", "1"]));
    for r in &rows {
        assert!((r[1] - (2.0 * r[0]).cos().powi(2)).abs() < 1e-10);
    }

    assert_eq!(
        ok_stdout(&["identical-modes", "--n", "1", "--alpha", "0.7"]),
        ok_stdout(&["two-level", "--alpha", "0.7"])
    );

    // period pi/10: sample exactly at multiples of it
    let t_max = format!("{}", std::f64::consts::PI);
    let csv = ok_stdout(&[
        "identical-modes",
        "--n",
        "100",
        "--alpha",
        "1",
        "--t-max",
        &t_max,
        "--samples",
        "201",
    ]);
    let (_, rows) = columns(&csv);
    for k in 0..=10 {
        assert!((rows[20 * k][1] - 1.0).abs() < 1e-9, "revival {k}");
    }
    for k in 0..10 {
        assert!(rows[20 * k + 10][1] < 1e-9, "half period {k}");
    }
}

#[test]
fn identical_modes_rejects_zero_modes() {
    let out = emission(&["identical-modes", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["two-level", "--bogus"][..],
        &["two-level", "--samples", "1"],
        &["two-level", "--t-max", "-1"],
        &["two-level", "--hbar", "0"],
        &["inverse"],
        &["inverse", "--m", "2"],
        &["inverse", "--flat", "--m", "2", "--format", "csv"],
        &["figure1", "--threshold", "1.5"],
    ] {
        assert_eq!(emission(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn inverse_flat_worked_instance() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = ok_stdout(&[
        "inverse",
        "--flat",
        "--m",
        "1",
        "--d",
        "1",
        "--eps0",
        "0",
        "--report",
        path_str(&report),
    ]);
    let model = StarModel64::from_json(&out).unwrap();
    let r = 1.0 / 3.0f64.sqrt();
    let mut eps = model.eps().to_vec();
    assert_eq!(eps[0], 0.0);
    eps[1..].sort_by(f64::total_cmp);
    for (a, b) in eps.iter().zip([0.0, -r, r]) {
        assert!((a - b).abs() < 1e-12);
    }
    for a in model.alpha() {
        assert!((a - r).norm() < 1e-12);
    }
    let rep: RoundTripReport64 =
        serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert!(rep.pass);
}

#[test]
fn inverse_random_profile_passes() {
    let out = emission(&["inverse", "--m", "16", "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0));
    let rep: RoundTripReport64 = serde_json::from_slice(&out.stderr).unwrap();
    assert!(rep.pass && rep.tolerance == 1e-8);
    assert_eq!(
        StarModel64::from_json(std::str::from_utf8(&out.stdout).unwrap())
            .unwrap()
            .dim(),
        33
    );
}

#[test]
fn inverse_error_exit_codes() {
    let malformed = emission_stdin(&["inverse", "--profile", "-"], "{ not json");
    assert_eq!(malformed.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&malformed.stderr).contains("parse error"));

    let zero = r#"{"m_half": 1, "eps0": 0, "d_width": 1, "overlaps": [0.5, 0.0, 0.5]}"#;
    assert_eq!(
        emission_stdin(&["inverse", "--profile", "-"], zero)
            .status
            .code(),
        Some(3)
    );

    let unnormalized = r#"{"m_half": 1, "eps0": 0, "d_width": 1, "overlaps": [0.5, 0.5, 0.5]}"#;
    assert_eq!(
        emission_stdin(&["inverse", "--profile", "-"], unnormalized)
            .status
            .code(),
        Some(2)
    );

    let strict = emission(&["inverse", "--flat", "--m", "8", "--tol", "1e-30"]);
    assert_eq!(strict.status.code(), Some(4));
}

#[test]
fn inverse_profile_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let profile = dir.path().join("profile.json");
    let model_a = dir.path().join("a.json");
    ok_stdout(&[
        "inverse",
        "--m",
        "5",
        "--seed",
        "9",
        "--eps0",
        "0.3",
        "--d",
        "2",
        "--profile-out",
        path_str(&profile),
        "--out",
        path_str(&model_a),
    ]);
    let from_file = ok_stdout(&["inverse", "--profile", path_str(&profile)]);
    assert_eq!(std::fs::read_to_string(&model_a).unwrap(), from_file);

    let p = SpectralProfile64::from_json(&std::fs::read_to_string(&profile).unwrap()).unwrap();
    let m = StarModel64::from_json(&from_file).unwrap();
    assert!(verify_round_trip(&m, &p, 1e-8).unwrap().pass);
}

fn run_figure1(dir: &Path, extra: &[&str]) {
    let svg = dir.join("figure1.svg");
    let mut args = vec!["figure1", "--out", path_str(dir), "--svg", path_str(&svg)];
    args.extend_from_slice(extra);
    ok_stdout(&args);
}

#[test]
fn figure1_default_run() {
    let dir = tempfile::tempdir().unwrap();
    run_figure1(dir.path(), &[]);
    let mut decay = Vec::new();
    for m in [1usize, 2, 5, 20] {
        let csv = std::fs::read_to_string(dir.path().join(format!("figure1_M{m}.csv"))).unwrap();
        assert!(csv.starts_with("t,P\n"));
        let series = SurvivalSeries64::from_csv(&csv).unwrap();
        let rows: Vec<(f64, f64)> = series.iter().collect();
        let mid = rows.len() / 2;
        let big_t = std::f64::consts::TAU * m as f64;
        assert!((rows[mid].0 - big_t).abs() < 1e-9 * big_t);
        assert!((rows[mid].1 - 1.0).abs() < 1e-9, "M={m}");
        if m == 1 {
            for (t, p) in &rows {
                assert!((p - dirichlet_survival(1, 1.0, *t)).abs() < 1e-10);
            }
        }
        let metrics = EmissionMetrics64::from_json(
            &std::fs::read_to_string(dir.path().join(format!("figure1_M{m}_metrics.json")))
                .unwrap(),
        )
        .unwrap();
        assert_eq!(metrics.threshold, 0.01);
        if m >= 5 {
            decay.push(metrics.decay_time.unwrap());
            let rev = metrics.revival_time.unwrap();
            assert!(rev > metrics.decay_time.unwrap() && rev < big_t);
        }
    }
    assert!((decay[0] - decay[1]).abs() / decay[0] < 0.1, "{decay:?}");

    let svg = std::fs::read_to_string(dir.path().join("figure1.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 4);
    assert!(svg.contains("M = 20"));
}

#[test]
fn figure1_custom_list_and_json() {
    let dir = tempfile::tempdir().unwrap();
    ok_stdout(&[
        "figure1",
        "--out",
        path_str(dir.path()),
        "--m-list",
        "3",
        "--format",
        "json",
        "--samples",
        "501",
        "--hbar",
        "0.5",
    ]);
    let text = std::fs::read_to_string(dir.path().join("figure1_M3.json")).unwrap();
    let series: SurvivalSeries64 = serde_json::from_str(&text).unwrap();
    assert_eq!(series.len(), 501);
    assert!((series.grid().t_end() - 0.5 * 2.0 * 6.0 * std::f64::consts::PI).abs() < 1e-9);
    assert!(!dir.path().join("figure1_M1.csv").exists());
}

#[test]
fn figure1_empty_list_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    for list in ["", ","] {
        let out = emission(&["figure1", "--out", path_str(dir.path()), "--m-list", list]);
        assert_eq!(out.status.code(), Some(2), "{list:?}");
    }
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn outputs_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_figure1(a.path(), &["--m-list", "1,4", "--samples", "2001"]);
    run_figure1(b.path(), &["--m-list", "1,4", "--samples", "2001"]);
    let mut names: Vec<_> = std::fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), 5);
    for name in names {
        assert_eq!(
            std::fs::read(a.path().join(&name)).unwrap(),
            std::fs::read(b.path().join(&name)).unwrap(),
            "{name:?}"
        );
    }

    let args = ["inverse", "--m", "7", "--seed", "123"];
    assert_eq!(emission(&args).stdout, emission(&args).stdout);
    let args = [
        "two-level",
        "--eps1",
        "0.3",
        "--alpha",
        "1.2",
        "--alpha-phase",
        "0.4",
        "--format",
        "json",
    ];
    assert_eq!(emission(&args).stdout, emission(&args).stdout);
}

#[test]
fn series_files_readable_by_core() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("s.csv");
    let json_path = dir.path().join("s.json");
    let svg_path = dir.path().join("s.svg");
    ok_stdout(&[
        "identical-modes",
        "--n",
        "3",
        "--alpha",
        "0.5",
        "--out",
        path_str(&csv_path),
        "--svg",
        path_str(&svg_path),
    ]);
    ok_stdout(&[
        "identical-modes",
        "--n",
        "3",
        "--alpha",
        "0.5",
        "--format",
        "json",
        "--out",
        path_str(&json_path),
    ]);

    let from_csv =
        SurvivalSeries64::from_csv(&std::fs::read_to_string(&csv_path).unwrap()).unwrap();
    let json_text = std::fs::read_to_string(&json_path).unwrap();
    let from_json: SurvivalSeries64 = serde_json::from_str(&json_text).unwrap();
    assert_eq!(from_csv.len(), from_json.len());
    for ((ta, pa), (tb, pb)) in from_csv.iter().zip(from_json.iter()) {
        assert!((ta - tb).abs() <= 1e-11 * tb.abs().max(1.0));
        assert!((pa - pb).abs() <= 1e-12);
    }
    let v: serde_json::Value = serde_json::from_str(&json_text).unwrap();
    assert_eq!(v["P_analytic"].as_array().unwrap().len(), 1000);

    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 2);
}
