use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use omit_core::commands::rerun;
use serde_json::Value;

fn preset(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("presets")
        .join(name)
}

fn omit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omit"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn error_record(out: &Output) -> Value {
    let text = String::from_utf8(out.stderr.clone()).unwrap();
    assert_eq!(text.lines().count(), 1, "{text}");
    serde_json::from_str(text.trim()).unwrap()
}

/// Value of `column` in the data row whose first cell is `key`.
fn csv_cell(csv: &str, key: &str, column: &str) -> String {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == column).unwrap();
    lines
        .map(|l| l.split(',').collect::<Vec<_>>())
        .find(|cells| cells[0] == key)
        .map(|cells| cells[col].to_string())
        .unwrap_or_else(|| panic!("no row {key} in\n{csv}"))
}

#[test]
fn metrics_csv_on_stdout() {
    let config = preset("conclusion.config");
    let out = omit(&["metrics", "--config", config.to_str().unwrap()]);
    assert!(out.status.success());
    let csv = stdout(&out);
    assert!(csv.starts_with("# tool: omit "));
    assert!(csv.contains("\nu_bias[V],r0[m],min_force[N],surface_density[1_cm2]\n"));
    let force: f64 = csv
        .lines()
        .last()
        .unwrap()
        .split(',')
        .nth(2)
        .unwrap()
        .parse()
        .unwrap();
    assert!((force - 0.88e-9).abs() / 0.88e-9 < 0.01);
}

#[test]
fn invert_width_taken_from_sweep_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = preset("fig2.config");
    let sweep = dir.path().join("sweep.csv");
    let out = omit(&[
        "sweep-n",
        "--config",
        config.to_str().unwrap(),
        "--out",
        sweep.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&sweep).unwrap();
    for n in ["1", "17", "40"] {
        let width = csv_cell(&csv, n, "width[rad_s]");
        let out = omit(&[
            "invert",
            "--config",
            config.to_str().unwrap(),
            "--override",
            &format!("invert.width_rad_s={width}"),
        ]);
        assert!(out.status.success());
        let result = stdout(&out);
        assert_eq!(csv_cell(&result, &width, "n_int"), n);
        assert_eq!(csv_cell(&result, &width, "ambiguous"), "0");
    }
}

#[test]
fn json_output_shape() {
    let config = preset("fig2.config");
    let out = omit(&[
        "tuning",
        "--config",
        config.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["columns"][2], "x_plus[rad_s]");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 1);
    assert_eq!(doc["provenance"]["config"]["kappa_hz"], 215000);
    assert_eq!(doc["provenance"]["command"], "omit tuning --format json");
}

#[test]
fn provenance_reproduces_written_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = preset("fig2.config");
    for (cmd, format) in [("fig2", "csv"), ("steady", "json"), ("fig4", "csv")] {
        let path = dir.path().join(format!("{cmd}.{format}"));
        let out = omit(&[
            cmd,
            "--config",
            config.to_str().unwrap(),
            "--format",
            format,
            "--override",
            "n_charge=5",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        let written = std::fs::read_to_string(&path).unwrap();
        assert_eq!(rerun(&written).unwrap(), written, "{cmd}");
    }
}

#[test]
fn unknown_key_exits_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.config");
    let text = std::fs::read_to_string(preset("fig2.config"))
        .unwrap()
        .replace("omega_m_hz", "omega_m_rad");
    std::fs::write(&path, text).unwrap();
    let out = omit(&["derive", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let rec = error_record(&out);
    assert_eq!(rec["error"], "config");
    assert!(rec["message"].as_str().unwrap().contains("omega_m_rad"));
    assert!(out.stdout.is_empty());
}

#[test]
fn missing_config_file_is_config_error() {
    let out = omit(&["derive", "--config", "/nonexistent/omit.config"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["exit_code"], 2);
}

#[test]
fn unattainable_width_exits_with_domain_code() {
    let config = preset("fig2.config");
    let out = omit(&[
        "invert",
        "--config",
        config.to_str().unwrap(),
        "--override",
        "invert.width_hz=10",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_record(&out)["error"], "domain");
}

#[test]
fn oracle_time_limit_exits_with_convergence_code() {
    let config = preset("fig2.config");
    let out = omit(&[
        "oracle",
        "--config",
        config.to_str().unwrap(),
        "--override",
        "oracle.detunings=1",
        "--override",
        "oracle.max_time_s=1e-5",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(error_record(&out)["error"], "convergence");
}

#[test]
fn bad_format_is_rejected() {
    let config = preset("fig2.config");
    let out = omit(&[
        "derive",
        "--config",
        config.to_str().unwrap(),
        "--format",
        "xml",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_file_is_replaced_whole() {
    let dir = tempfile::tempdir().unwrap();
    let config = preset("fig2.config");
    let path = dir.path().join("m.csv");
    std::fs::write(&path, "x".repeat(100_000)).unwrap();
    let out = omit(&[
        "metrics",
        "--config",
        config.to_str().unwrap(),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# tool:"));
    assert!(!text.contains("xxx"));
}
