use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use eprsim::cli::output::parse_csv;
use serde_json::Value;

fn eprsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eprsim"))
        .args(args)
        .output()
        .expect("spawn eprsim")
}

fn stdout(args: &[&str]) -> String {
    let out = eprsim(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn meta<'a>(meta: &'a [(String, String)], key: &str) -> &'a str {
    meta.iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .unwrap_or_else(|| panic!("missing metadata {key}"))
}

#[test]
fn gisin_disentangled_curve_spans_offset_to_peak() {
    let text = stdout(&["gisin", "--model", "disentangled", "--engine", "analytic", "--grid", "0:360:64"]);
    let (_, rows) = parse_csv(&text).unwrap();
    assert_eq!(rows.len(), 64);
    let min = rows.iter().map(|r| r.y).fold(f64::INFINITY, f64::min);
    let max = rows.iter().map(|r| r.y).fold(f64::NEG_INFINITY, f64::max);
    assert_eq!(min, 0.0625);
    assert_eq!(max, 0.1875);
    assert!(text.contains("\n180.000000,0.1875,\n"));
    assert!(rows.iter().all(|r| r.std_err.is_none()));
}

#[test]
fn chsh_json_reports_tsirelson_value() {
    let text = stdout(&["chsh", "--model", "entangled", "--angles", "0,45,22.5,67.5", "--format", "json"]);
    let v: Value = serde_json::from_str(&text).unwrap();
    let s = v["meta"]["S"].as_f64().unwrap();
    assert!((s + 2.0 * 2f64.sqrt()).abs() < 1e-9, "S = {s}");
    assert!(v["points"].as_array().is_some_and(|p| !p.is_empty()));
}

#[test]
fn aspect_montecarlo_parallel_polarizers_never_coincide_in_like_channels() {
    let text = stdout(&[
        "aspect", "--model", "entangled", "--a", "0", "--b", "0", "--engine", "montecarlo", "--trials", "1000",
        "--seed", "7",
    ]);
    let (m, _) = parse_csv(&text).unwrap();
    assert_eq!(meta(&m, "n_pp"), "0");
    assert_eq!(meta(&m, "n_mm"), "0");
    let unlike: u64 = meta(&m, "n_pm").parse::<u64>().unwrap() + meta(&m, "n_mp").parse::<u64>().unwrap();
    assert_eq!(unlike, 1000);
}

#[test]
fn kim_and_zeilinger_presets() {
    let text = stdout(&["kim", "--model", "entangled", "--detector", "I", "--grid", "kim-figure3"]);
    let (_, rows) = parse_csv(&text).unwrap();
    assert_eq!(rows.len(), 64);
    let text = stdout(&["zeilinger", "--model", "disentangled", "--grid", "zeilinger-table1"]);
    let (m, rows) = parse_csv(&text).unwrap();
    assert_eq!(rows.len(), 2);
    let rel: f64 = meta(&m, "relative_intensity").parse().unwrap();
    assert!((rel - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn metadata_command_reproduces_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.csv");
    let status = Command::new(env!("CARGO_BIN_EXE_eprsim"))
        .args(["kim", "--model", "disentangled", "--detector", "II", "--grid", "0:180:6"])
        .args(["--engine", "montecarlo", "--trials", "5000", "--seed", "3", "--phase-window", "20"])
        .arg("--out")
        .arg(&first)
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(&first).unwrap();
    let (m, _) = parse_csv(&text).unwrap();
    let command = meta(&m, "command");
    for key in ["seed", "model", "engine", "tool"] {
        assert!(m.iter().any(|(k, _)| k == key), "header lacks {key}");
    }

    let second = dir.path().join("second.csv");
    let mut words = command.split_whitespace();
    assert_eq!(words.next(), Some("eprsim"));
    let status = Command::new(env!("CARGO_BIN_EXE_eprsim"))
        .args(words)
        .arg("--out")
        .arg(&second)
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());
}

#[test]
fn config_file_values_yield_to_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# shared settings\nmodel = disentangled\nengine=analytic\nb=0\n").unwrap();
    let c = cfg.to_str().unwrap();
    let (m, rows) = parse_csv(&stdout(&["aspect", "--config", c, "--a", "0"])).unwrap();
    assert_eq!(meta(&m, "model"), "disentangled");
    assert_eq!(rows[0].y, -0.5);
    let (m, rows) = parse_csv(&stdout(&["aspect", "--config", c, "--a", "0", "--model", "entangled"])).unwrap();
    assert_eq!(meta(&m, "model"), "entangled");
    assert_eq!(rows[0].y, -1.0);
}

fn code(args: &[&str]) -> i32 {
    eprsim(args).status.code().expect("exit code")
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["rate"]), 0);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["teleport"]), 2);
    assert_eq!(code(&["gisin", "--bogus"]), 2);
    assert_eq!(code(&["gisin", "--grid", "0:360:0"]), 2);
    assert_eq!(code(&["gisin", "--a0", "0.9", "--a1", "0.9"]), 2);
    assert_eq!(code(&["aspect", "--engine", "montecarlo", "--trials", "0"]), 2);
    assert_eq!(code(&["chsh", "--angles", "0,45"]), 2);
    assert_eq!(code(&["kim", "--detector", "III"]), 2);
    assert_eq!(code(&["aspect", "--config", "/nonexistent/eprsim.cfg"]), 1);

    let dir = tempfile::tempdir().unwrap();
    let unwritable = dir.path().join("missing-dir").join("out.csv");
    let out = eprsim(&["gisin", "--out", unwritable.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    assert!(!Path::new(&unwritable).exists());
}

#[test]
fn validation_errors_go_to_stderr() {
    let out = eprsim(&["gisin", "--grid", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}
