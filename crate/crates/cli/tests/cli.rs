use std::path::PathBuf;
use std::process::Command;

use dshell_cli::{run, EXIT_INVALID, EXIT_OK};
use dshell_core::variational::critical_angle_closed;

fn dshell(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("dshell").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dshell-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn gap_reports_the_band_edge() {
    let (code, out, _) = dshell(&["gap", "--tau", "-1", "--m", "1"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let eps = v["result"]["eps_tau"].as_f64().unwrap();
    assert!((eps - 0.6).abs() < 1e-15, "{eps}");
    assert_eq!(v["config"]["command"], "gap");
}

#[test]
fn excluded_coupling_is_rejected_without_output() {
    let dir = scratch("excluded");
    let target = dir.join("gap.json");
    let (code, out, err) = dshell(&["gap", "--tau", "2", "--m", "1", "-o", target.to_str().unwrap()]);
    assert_eq!(code, EXIT_INVALID);
    assert!(out.is_empty());
    assert!(err.contains("tau"), "{err}");
    assert!(!target.exists());
}

#[test]
fn critical_angle_row_is_the_closed_form() {
    let (code, out, _) = dshell(&["critical-angle", "--tau", "-1", "--N", "1"]);
    assert_eq!(code, EXIT_OK);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 1);
    let w: f64 = rows[0][3].parse().unwrap();
    assert_eq!(w.to_bits(), critical_angle_closed(-1.0, 1).unwrap().to_bits());
}

#[test]
fn degree_suffix_equals_radians() {
    let (_, a, _) = dshell(&["spin-orbit", "--tau", "-1", "--omega", "45deg"]);
    let (_, b, _) = dshell(&["spin-orbit", "--tau", "-1", "--omega", "0.7853981633974483"]);
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn json_report_replays_from_its_config() {
    let dir = scratch("replay-json");
    let (code, first, _) = dshell(&["testfn", "--tau", "-3", "--N", "2", "--coefficients", "1:0,0.5:-0.25"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, v["config"].to_string()).unwrap();
    let (code, second, _) = dshell(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(first, second);
}

#[test]
fn csv_report_replays_from_its_header() {
    let dir = scratch("replay-csv");
    let (code, first, _) = dshell(&["aux1d", "--tau", "-1", "--gamma", "1:3:5"]);
    assert_eq!(code, EXIT_OK);
    let header = first.lines().next().unwrap().strip_prefix("# config: ").unwrap();
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, header).unwrap();
    let (_, second, _) = dshell(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(first, second);
    assert_eq!(csv_rows(&first).len(), 5);
}

#[test]
fn flags_override_the_config_file() {
    let dir = scratch("override");
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, r#"{"command": "gap", "tau": -1, "m": 2}"#).unwrap();
    let (_, out, _) = dshell(&["gap", "--config", cfg.to_str().unwrap(), "--tau", "-3"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["config"]["tau"], -3.0);
    assert_eq!(v["config"]["m"], 2.0);
}

#[test]
fn config_errors_exit_with_invalid() {
    let dir = scratch("bad-config");
    let cfg = dir.join("config.json");
    for text in [r#"{"tau": -1, "mass": 1}"#, r#"{"tau": "minus one"}"#, "not json"] {
        std::fs::write(&cfg, text).unwrap();
        let (code, out, err) = dshell(&["gap", "--config", cfg.to_str().unwrap()]);
        assert_eq!(code, EXIT_INVALID, "{text}: {err}");
        assert!(out.is_empty());
    }
    let (code, _, _) = dshell(&["run"]);
    assert_eq!(code, EXIT_INVALID);
    let (code, _, _) = dshell(&["gap"]);
    assert_eq!(code, EXIT_INVALID);
    let (code, _, _) = dshell(&["gap", "--tau", "-1", "--threads", "0"]);
    assert_eq!(code, EXIT_INVALID);
    let (code, _, _) = dshell(&["gap", "--tau", "-1", "--bogus"]);
    assert_eq!(code, EXIT_INVALID);
    let (code, _, _) = dshell(&["spin-orbit", "--tau", "-1", "--omega", "90deg"]);
    assert_eq!(code, EXIT_INVALID);
    let (code, _, _) = dshell(&["fem-count", "--tau", "-1", "--omega", "5e-4", "--layout", "disk"]);
    assert_eq!(code, EXIT_INVALID);
}

#[test]
fn missing_config_file_is_an_io_error() {
    let (code, _, _) = dshell(&["gap", "--config", "/nonexistent/dshell.json"]);
    assert_eq!(code, dshell_cli::EXIT_IO);
}

#[test]
fn thread_variable_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_dshell"))
        .args(["gap", "--tau", "-1"])
        .env("DSHELL_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INVALID));
    assert!(out.stdout.is_empty());
}

#[test]
fn matrices_are_exported_on_request() {
    let dir = scratch("export");
    let report = dir.join("report.json");
    let (code, _, err) = dshell(&[
        "fem-count",
        "--tau",
        "-1",
        "--omega",
        "0.6",
        "--radius",
        "3",
        "--h",
        "0.5",
        "--k",
        "2",
        "--export",
        dir.to_str().unwrap(),
        "-o",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let unknowns = v["result"]["mesh"]["unknowns"].as_u64().unwrap() as usize;
    for name in ["A.mtx", "B.mtx"] {
        let m = dshell_fem::mm::parse(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap();
        assert_eq!(m.n, unknowns);
        assert!(m.entries.iter().all(|&(r, c, _)| c <= r));
    }
}

#[test]
fn sweep_leaves_inapplicable_cells_empty() {
    let (code, out, _) = dshell(&["sweep", "--tau-grid", "-1,1", "--omega-grid", "0.2,90deg"]);
    assert_eq!(code, EXIT_OK);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert_eq!(r.len(), 10);
        assert_eq!(r[9], "ok");
    }
    // attractive coupling at a real corner has every column filled
    assert!(rows[0].iter().all(|c| !c.is_empty()));
    // straight line: no spin-orbit root
    assert!(rows[1][4].is_empty());
    // repulsive coupling: no critical angle
    assert!(rows[2][5].is_empty());
}

#[test]
fn help_exits_cleanly() {
    let (code, out, _) = dshell(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("fem-count"));
}
