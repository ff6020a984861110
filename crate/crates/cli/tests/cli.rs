//! End-to-end tests of the binary: verbs, exit codes and byte-level output
//! determinism across worker counts.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fdnoma"))
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fdnoma-cli-{tag}-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn analyze_writes_csv_to_stdout() {
    let dir = temp_dir("analyze");
    let scenario = dir.join("sweep.txt");
    fs::write(&scenario, "rho_db = 30\nsweep = a_s, 0.1, 0.3, 0.1\n").unwrap();
    let output = bin()
        .args(["analyze", "--scenario"])
        .arg(&scenario)
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = stdout_of(&output);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "rho_db,rho_si_db,d_se,d_re,a_s,a_r,c_d1,c_d2,ce_d1,ce_d2_ub,sec_lb"
    );
    assert_eq!(lines.count(), 3);
}

#[test]
fn bad_scenario_exits_with_config_error() {
    let dir = temp_dir("bad-scn");
    let scenario = dir.join("bad.txt");
    fs::write(&scenario, "# comment\na_s = 0.7\n").unwrap();
    let output = bin()
        .args(["analyze", "--scenario"])
        .arg(&scenario)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let err = String::from_utf8_lossy(&output.stderr);
    assert!(err.contains("line 2"), "stderr: {err}");
    assert!(err.contains("a_s"), "stderr: {err}");
}

#[test]
fn missing_scenario_file_exits_with_config_error() {
    let output = bin()
        .args(["simulate", "--scenario", "/definitely/not/here.txt"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn invalid_figure_id_exits_with_config_error() {
    let output = bin().args(["figure", "9"]).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn figure_rejects_scenario_flag() {
    let dir = temp_dir("fig-scn");
    let scenario = dir.join("scn.txt");
    fs::write(&scenario, "rho_db = 20\n").unwrap();
    let output = bin()
        .args(["figure", "4", "--scenario"])
        .arg(&scenario)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn simulate_respects_mode_and_n() {
    let output = bin()
        .args(["simulate", "--n", "2000", "--seed", "7", "--mode", "b"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = stdout_of(&output);
    assert!(text.contains("# seed = 7"));
    assert!(text.contains("# n = 2000"));
    assert!(text.contains("secrecy,secrecy_se"));
}

#[test]
fn optimize_emits_one_row_per_realization() {
    let output = bin()
        .args(["optimize", "--n", "4", "--seed", "3"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = stdout_of(&output);
    let data_rows = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("realization"))
        .count();
    assert_eq!(data_rows, 4);
}

#[test]
fn figure_output_identical_across_worker_counts() {
    let dir = temp_dir("determinism");
    let one = dir.join("one.csv");
    let four = dir.join("four.csv");
    let status = bin()
        .args(["figure", "2", "--n", "200", "--seed", "3", "--out"])
        .arg(&one)
        .env("RAYON_NUM_THREADS", "1")
        .status()
        .unwrap();
    assert!(status.success());
    let status = bin()
        .args(["figure", "2", "--n", "200", "--seed", "3", "--out"])
        .arg(&four)
        .env("RAYON_NUM_THREADS", "4")
        .status()
        .unwrap();
    assert!(status.success());
    let a = fs::read(&one).unwrap();
    let b = fs::read(&four).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b, "figure CSV differs across worker counts");
}

#[test]
fn figure7_smoke() {
    let output = bin()
        .args(["figure", "7", "--n", "30", "--seed", "2"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = stdout_of(&output);
    assert!(text.contains("ssrot_mean"));
    let data_rows = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("rho_db"))
        .count();
    assert_eq!(data_rows, 2);
}

#[test]
fn unwritable_output_exits_with_config_error() {
    let output = bin()
        .args(["analyze", "--out", "/definitely/not/a/dir/out.csv"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let output = bin().arg("--help").output().unwrap();
    assert!(output.status.success());
    let unknown = bin().arg("frobnicate").output().unwrap();
    assert_eq!(unknown.status.code(), Some(1));
}

#[test]
fn selftest_passes() {
    let output = bin().arg("selftest").output().unwrap();
    assert!(
        output.status.success(),
        "selftest failed: {}",
        stdout_of(&output)
    );
    assert!(stdout_of(&output).contains("all 9 checks passed"));
}
