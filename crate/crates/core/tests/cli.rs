//! End-to-end checks of the command-line binary: exit codes, output path
//! resolution, and the seed override.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nfs-entangle"))
}

fn run_in(dir: &Path, args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = bin();
    cmd.args(args).current_dir(dir);
    cmd.env_remove("NFS_ENTANGLE_OUT_DIR");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

#[test]
fn rate_runs_with_defaults_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["rate"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("rate.csv")).unwrap();
    assert!(csv.starts_with("# nfs-entangle mode = rate\n"));
    assert!(csv.contains("paper_claims=~1 Hz"));
}

#[test]
fn invalid_config_value_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[sample]\nalpha = -2.0\n").unwrap();
    let out = run_in(dir.path(), &["wavepacket", "--config", "bad.toml"], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sample.alpha"));
}

#[test]
fn unknown_config_key_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[sample]\nalhpa = 1.0\n").unwrap();
    let out = run_in(dir.path(), &["wavepacket", "--config", "bad.toml"], &[]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_config_file_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["fringe", "--config", "no_such_file.toml"], &[]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unknown_subcommand_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["frobnicate"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn env_dir_applies_only_without_explicit_out() {
    let dir = tempfile::tempdir().unwrap();
    let env_dir = dir.path().join("env_out");
    let env_str = env_dir.to_str().unwrap();
    let out = run_in(dir.path(), &["rate"], &[("NFS_ENTANGLE_OUT_DIR", env_str)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(env_dir.join("rate.csv").exists());

    let out = run_in(
        dir.path(),
        &["rate", "--out", "explicit.csv"],
        &[("NFS_ENTANGLE_OUT_DIR", env_str)],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("explicit.csv").exists());
    assert!(!env_dir.join("explicit.csv").exists());
}

#[test]
fn seed_flag_overrides_config_and_changes_events() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "[experiment]\nn_events = 500\nseed = 3\n\n[grid]\nt_end = 300.0\ndt = 0.05\n",
    )
    .unwrap();
    for (name, seed) in [("s3.csv", None), ("s9.csv", Some("9"))] {
        let mut args = vec!["simulate", "--config", "run.toml", "--out", name];
        if let Some(s) = seed {
            args.extend(["--seed", s]);
        }
        let out = run_in(dir.path(), &args, &[]);
        assert_eq!(out.status.code(), Some(0));
    }
    let a = std::fs::read_to_string(dir.path().join("s3.csv")).unwrap();
    let b = std::fs::read_to_string(dir.path().join("s9.csv")).unwrap();
    assert!(a.contains("# seed = 3"));
    assert!(b.contains("# seed = 9"));
    assert_ne!(a.lines().count(), 0);
    // different seeds must change at least the metadata and typically the log
    assert_ne!(a, b);
}
