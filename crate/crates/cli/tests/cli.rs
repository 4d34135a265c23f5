//! End-to-end checks of the command-line interface and its exit codes.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_deckray"))
}

fn temp_out(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("deckray_cli_tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn renders_builtin_scene() {
    let out = temp_out("cornell_small.ppm");
    let status = bin()
        .args([
            "--scene",
            "cornell_torus",
            "--width",
            "64",
            "--height",
            "48",
            "--spp",
            "1",
            "--max-bounces",
            "1",
            "--max-transport-level",
            "4",
            "--seed",
            "42",
            "-o",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let bytes = std::fs::read(&out).unwrap();
    assert!(bytes.starts_with(b"P6\n64 48\n255\n"));
    assert_eq!(bytes.len(), 13 + 64 * 48 * 3);
}

#[test]
fn missing_scene_exits_one_with_diagnostic() {
    let output = bin()
        .args(["--scene", "/no/such/scene.json", "-o", "/tmp/unused.ppm"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("scene"), "stderr: {stderr}");
}

#[test]
fn invalid_scene_exits_one() {
    let bad = temp_out("bad_scene.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let output = bin()
        .arg("--scene")
        .arg(&bad)
        .args(["-o", "/tmp/unused.ppm"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("parse error"));
}

#[test]
fn unwritable_output_exits_two() {
    let output = bin()
        .args([
            "--scene",
            "cornell_torus",
            "--width",
            "8",
            "--height",
            "8",
            "--spp",
            "1",
            "-o",
            "/no/such/dir/out.ppm",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn bad_threads_value_exits_one() {
    let output = bin()
        .args([
            "--scene",
            "cornell_torus",
            "--threads",
            "many",
            "-o",
            "/tmp/unused.ppm",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("--threads"));
}

#[test]
fn no_indirect_mode_renders() {
    let out = temp_out("no_indirect.ppm");
    let status = bin()
        .args([
            "--scene",
            "cornell_torus",
            "--width",
            "32",
            "--height",
            "24",
            "--spp",
            "1",
            "--no-indirect",
            "--threads",
            "2",
            "-o",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(out.exists());
}
