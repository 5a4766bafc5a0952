use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gauge-lab"))
        .args(args)
        .env_remove("GAUGE_LAB_OUT")
        .output()
        .unwrap()
}

fn read(dir: &Path, file: &str) -> Vec<u8> {
    fs::read(dir.join(file)).unwrap()
}

#[test]
fn single_suite_matches_its_part_of_all() {
    let cfg = config("torus.toml");
    let (one, all) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let out = lab(&[
        "fock",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        one.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    lab(&[
        "all",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        all.path().to_str().unwrap(),
    ]);
    assert_eq!(read(one.path(), "fock.json"), read(all.path(), "fock.json"));
    assert!(all.path().join("summary.json").exists());
    assert!(!one.path().join("summary.json").exists());
}

#[test]
fn missing_key_exits_with_two_before_writing() {
    let text = fs::read_to_string(config("circle.toml")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.toml");
    fs::write(&broken, text.replace("gauge.pairs = 50\n", "")).unwrap();
    let out_dir = dir.path().join("out");
    let out = lab(&[
        "gauge",
        "--config",
        broken.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("pairs"), "{err}");
    assert!(!out_dir.exists());
}

#[test]
fn unreadable_config_exits_with_two() {
    let out = lab(&["ladders", "--config", "/nonexistent/lab.toml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = lab(&["spectra", "--config", "x.toml"]);
    assert!(!out.status.success());
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn failing_check_exits_with_one() {
    // The circle continuum comparison at N = 64 is out of reach of the
    // three-point stencil for |k| near N/8.
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("circle.toml");
    let out = lab(&[
        "spectrum",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&read(dir.path(), "spectrum.json")).unwrap();
    let failed: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["verdict"] == "fail")
        .map(|c| c["check"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["continuum_low_modes"]);
}

#[test]
fn environment_overrides_output_directory() {
    let (env_dir, flag_dir) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cfg = config("circle.toml");
    let out = Command::new(env!("CARGO_BIN_EXE_gauge-lab"))
        .args([
            "ladders",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            flag_dir.path().to_str().unwrap(),
        ])
        .env("GAUGE_LAB_OUT", env_dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(env_dir.path().join("ladders.json").exists());
    assert!(env_dir.path().join("stamp.txt").exists());
    assert!(!flag_dir.path().join("ladders.json").exists());
}

#[test]
fn seed_flag_changes_results_and_digests_stay_put() {
    let cfg = config("circle.toml");
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    lab(&[
        "ladders",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        a.path().to_str().unwrap(),
    ]);
    lab(&[
        "ladders",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        b.path().to_str().unwrap(),
        "--seed",
        "7",
    ]);
    let ra: serde_json::Value = serde_json::from_slice(&read(a.path(), "ladders.json")).unwrap();
    let rb: serde_json::Value = serde_json::from_slice(&read(b.path(), "ladders.json")).unwrap();
    assert_eq!(rb["seed"], 7);
    assert_ne!(ra["checks"][0]["inputs_digest"], rb["checks"][0]["inputs_digest"]);
    assert_ne!(ra["details"]["worst_word"], rb["details"]["worst_word"]);
}
