//! Integration tests for the binary surface: exit codes, config handling,
//! and output files, plus cross-command sanity checks on the library API.

use oqam_eq_cli::config::RunConfig;
use oqam_eq_cli::experiments::{run_ber_block, run_nlms};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_oqam-eq"))
}

#[test]
fn corrupt_config_exits_2_and_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "frame_size = 12\n").unwrap();
    let out = bin()
        .args(["verify", "--config"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("frame_size"), "stderr was: {stderr}");
}

#[test]
fn unparseable_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.toml");
    std::fs::write(&path, "seed = \n").unwrap();
    let out = bin()
        .args(["mmse-sweep", "--config"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_exits_2() {
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_small_run_exits_0_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["verify", "--trials", "3", "--seed", "5", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = std::fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report.contains("verify: PASS"));
}

#[test]
fn mmse_sweep_rerun_writes_identical_files() {
    let run = |dir: &std::path::Path| {
        let out = bin()
            .args(["mmse-sweep", "--trials", "4", "--seed", "9", "--out"])
            .arg(dir)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        std::fs::read(dir.join("mmse_sweep.csv")).unwrap()
    };
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    assert_eq!(run(d1.path()), run(d2.path()));
}

#[test]
fn csv_headers_carry_hash_seed_and_version() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["mmse-sweep", "--trials", "2", "--seed", "3", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("mmse_sweep.csv")).unwrap();
    let first = csv.lines().next().unwrap();
    assert!(first.starts_with("# config_hash="));
    assert!(first.contains("seed=3"));
    assert!(first.contains(&format!("version={}", env!("CARGO_PKG_VERSION"))));
    assert!(!csv.contains('\r'));
}

#[test]
fn adaptive_ber_is_worse_than_block_ber_at_same_snr() {
    // Known-CSI block equalization lower-bounds the trained NLMS payload BER.
    let cfg = RunConfig {
        seed: 31,
        snr_db: vec![10.0],
        channels: 25,
        min_bits: 60_000,
        max_bits: 200_000,
        target_errors: 15,
        nlms_runs: 40,
        ..RunConfig::default()
    };
    let (block, _) = run_ber_block(&cfg).unwrap();
    let (adaptive, _) = run_nlms(&cfg).unwrap();
    let block_roe = block[0].ber_roe();
    let adaptive_roe = adaptive.ber_points[0].errors.roe as f64
        / adaptive.ber_points[0].bits as f64;
    assert!(
        adaptive_roe >= block_roe,
        "adaptive {adaptive_roe:.3e} vs block {block_roe:.3e}"
    );
}
