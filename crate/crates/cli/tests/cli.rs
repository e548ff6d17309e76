//! End-to-end tests of the `qfl` binary: exit codes, artifact layout,
//! deterministic reports and the JSON field-ingest interface.

use std::path::Path;
use std::process::{Command, Output};

fn qfl(out_dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfl"))
        .args(args)
        .env("QFL_OUT", out_dir)
        .output()
        .expect("binary runs")
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
}

#[test]
fn hardy_scenario_reports_the_paper_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let out = qfl(dir.path(), &["hardy"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("hardy/report.json"))).unwrap();
    let amplitude = report["values"]["amplitude_re"].as_f64().unwrap();
    let probability = report["values"]["probability"].as_f64().unwrap();
    assert!((amplitude + 1.0 / (2.0 * 3.0f64.sqrt())).abs() < 1e-12);
    assert!((probability - 1.0 / 12.0).abs() < 1e-12);
    assert!(report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"].as_bool().unwrap()));
}

#[test]
fn blackhole_scenario_reports_the_unit_hole() {
    let dir = tempfile::tempdir().unwrap();
    let out = qfl(dir.path(), &["blackhole"]);
    assert!(out.status.success());
    let derived: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("blackhole/blackhole.json"))).unwrap();
    let pi = std::f64::consts::PI;
    assert_eq!(derived["r_h"].as_f64(), Some(2.0));
    assert!((derived["A"].as_f64().unwrap() - 16.0 * pi).abs() < 1e-12);
    assert!((derived["S"].as_f64().unwrap() - 4.0 * pi).abs() < 1e-12);
    assert!((derived["T"].as_f64().unwrap() - 1.0 / (8.0 * pi)).abs() < 1e-15);
}

#[test]
fn unknown_scenario_exits_2_without_writing() {
    let dir = tempfile::tempdir().unwrap();
    let out = qfl(dir.path(), &["warp-drive"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn unknown_parameter_exits_2_without_writing() {
    let dir = tempfile::tempdir().unwrap();
    let out = qfl(dir.path(), &["blackhole", "--param", "spin=0.9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown parameter"));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn malformed_parameter_value_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = qfl(dir.path(), &["blackhole", "--param", "mass=heavy"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failing_invariant_exits_1_and_names_the_check() {
    // A macroscopic dM breaks the differential first-law reading.
    let dir = tempfile::tempdir().unwrap();
    let out = qfl(dir.path(), &["blackhole", "--param", "dm=0.5"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("first law residual"), "stderr: {stderr}");
    // The report is still written, with the failing check recorded.
    let report: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("blackhole/report.json"))).unwrap();
    assert!(report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| !c["passed"].as_bool().unwrap()));
}

#[test]
fn identical_invocations_produce_byte_identical_reports() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    for dir in [&dir_a, &dir_b] {
        let out = qfl(
            dir.path(),
            &["sequential", "--seed", "42", "--param", "runs=20000"],
        );
        assert!(out.status.success());
    }
    let a = read(&dir_a.path().join("sequential/report.json"));
    let b = read(&dir_b.path().join("sequential/report.json"));
    assert_eq!(a, b);
}

#[test]
fn seeds_change_the_monte_carlo_but_not_the_exact_values() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    assert!(qfl(dir_a.path(), &["sequential", "--seed", "1"])
        .status
        .success());
    assert!(qfl(dir_b.path(), &["sequential", "--seed", "2"])
        .status
        .success());
    let a: serde_json::Value =
        serde_json::from_str(&read(&dir_a.path().join("sequential/report.json"))).unwrap();
    let b: serde_json::Value =
        serde_json::from_str(&read(&dir_b.path().join("sequential/report.json"))).unwrap();
    assert_eq!(
        a["values"]["chain_probability"],
        b["values"]["chain_probability"]
    );
    assert_ne!(a["values"]["mc_frequency"], b["values"]["mc_frequency"]);
}

#[test]
fn kg_field_spec_is_ingested_from_json() {
    let dir = tempfile::tempdir().unwrap();
    let field_path = dir.path().join("field.json");
    std::fs::write(
        &field_path,
        r#"{"L": 6.283185307179586, "m": 1.0, "terms": [
            {"n": 1, "sign": "positive", "re": 1.0, "im": 0.0},
            {"n": 3, "sign": "positive", "re": 1.0, "im": 0.0}
        ]}"#,
    )
    .unwrap();
    let out = qfl(
        dir.path(),
        &[
            "kg-negativity",
            "--param",
            &format!("field={}", field_path.display()),
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("kg-negativity/report.json"))).unwrap();
    assert!(report["values"]["min_j0"].as_f64().unwrap() < 0.0);
    assert!(report["values"]["total_charge"].as_f64().unwrap() > 0.0);

    // The scan table uses the documented column layout.
    let csv = read(&dir.path().join("kg-negativity/current.csv"));
    assert!(csv.starts_with("t,x,j0,j1\n"));
}

#[test]
fn malformed_field_spec_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let field_path = dir.path().join("broken.json");
    std::fs::write(&field_path, "{\"L\": }").unwrap();
    let out = qfl(
        dir.path(),
        &[
            "kg-negativity",
            "--param",
            &format!("field={}", field_path.display()),
        ],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn spectrum_csv_has_the_documented_columns() {
    let dir = tempfile::tempdir().unwrap();
    assert!(qfl(dir.path(), &["unruh"]).status.success());
    let csv = read(&dir.path().join("unruh/spectrum.csv"));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("omega,occupation,temperature"));
    assert_eq!(lines.count(), 20);
}

#[test]
fn quench_report_follows_the_schema() {
    let dir = tempfile::tempdir().unwrap();
    assert!(qfl(dir.path(), &["quench", "--param", "n_max=2"])
        .status
        .success());
    let quench: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("quench/quench.json"))).unwrap();
    assert_eq!(quench["m_in"].as_f64(), Some(1.0));
    assert_eq!(quench["m_out"].as_f64(), Some(2.0));
    assert!(quench["L"].as_f64().is_some());
    let modes = quench["modes"].as_array().unwrap();
    assert_eq!(modes.len(), 5);
    for mode in modes {
        for key in ["n", "omega_in", "omega_out", "alpha", "beta", "n_created"] {
            assert!(mode.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn fock_quartic_potential_is_accepted_and_junk_is_not() {
    let dir = tempfile::tempdir().unwrap();
    let out = qfl(
        dir.path(),
        &[
            "fock-spectrum",
            "--param",
            "dim=96",
            "--param",
            "potential=quartic:0.1",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let spectrum: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("fock-spectrum/spectrum.json"))).unwrap();
    assert!(spectrum["n_commutator_norm"].as_f64().unwrap() > 0.0);
    assert_eq!(spectrum["eigenvalues"].as_array().unwrap().len(), 96);

    let out = qfl(dir.path(), &["fock-spectrum", "--param", "potential=morse"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn all_aggregates_and_csv_only_mode_skips_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = qfl(
        dir.path(),
        &["all", "--parallel", "--format", "csv", "--param", "x=1"],
    );
    // 'all' refuses per-scenario params.
    assert_eq!(out.status.code(), Some(2));

    let out = qfl(dir.path(), &["unruh", "--format", "csv"]);
    assert!(out.status.success());
    assert!(dir.path().join("unruh/spectrum.csv").exists());
    assert!(!dir.path().join("unruh/report.json").exists());
}

#[test]
fn all_parallel_matches_sequential_outputs() {
    let seq = tempfile::tempdir().unwrap();
    let par = tempfile::tempdir().unwrap();
    let out_seq = qfl(seq.path(), &["all", "--seed", "3", "--format", "json"]);
    assert!(
        out_seq.status.success(),
        "{}",
        String::from_utf8_lossy(&out_seq.stderr)
    );
    let out_par = qfl(
        par.path(),
        &["all", "--seed", "3", "--format", "json", "--parallel"],
    );
    assert!(
        out_par.status.success(),
        "{}",
        String::from_utf8_lossy(&out_par.stderr)
    );
    for scenario in [
        "hardy",
        "sequential",
        "epr",
        "pauli-obstruction",
        "double-slit",
        "quantum-potential",
        "nonlocal-q",
        "kg-negativity",
        "dirac-check",
        "fock-spectrum",
        "quench",
        "unruh",
        "hawking",
        "blackhole",
    ] {
        let a = read(&seq.path().join(scenario).join("report.json"));
        let b = read(&par.path().join(scenario).join("report.json"));
        assert_eq!(
            a, b,
            "scenario {scenario} differs between serial and parallel"
        );
    }
}
