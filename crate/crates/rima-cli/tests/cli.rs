//! End-to-end checks of the installed binary: exit codes, error categories,
//! and output files.

use std::fs;
use std::path::Path;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_rima");

const CONFIG: &str = r#"
seed = 42
snr_grid_db = [0.0, 10.0, 20.0]
trials_per_point = 2000

[[schemes]]
type = "rima"
n_e = 24
n_g = 2
modulation_order = 2

[[schemes]]
type = "ris_noma"
mu = 0.7
n_e = 24
modulation_order = 2

[[schemes]]
type = "noma"
mu = 0.7
modulation_order = 2
"#;

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("config.toml");
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn run_succeeds_and_lists_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), CONFIG);
    let out_dir = dir.path().join("out");
    let output = Command::new(BIN)
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out-dir")
        .arg(&out_dir)
        .args(["--threads", "2"])
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let stdout = String::from_utf8(output.stdout).unwrap();
    for name in [
        "rima.csv",
        "ris_noma.csv",
        "noma.csv",
        "combined.csv",
        "manifest.toml",
        "config_echo.toml",
    ] {
        assert!(stdout.contains(name), "missing {name} in listing");
        assert!(out_dir.join(name).exists());
    }
    let combined = fs::read_to_string(out_dir.join("combined.csv")).unwrap();
    assert_eq!(combined.lines().count(), 1 + 3 * 3);
}

#[test]
fn rerunning_the_echo_reproduces_the_curves() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), CONFIG);
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    assert!(Command::new(BIN)
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out-dir")
        .arg(&out_a)
        .output()
        .unwrap()
        .status
        .success());
    assert!(Command::new(BIN)
        .args(["run", "--config"])
        .arg(out_a.join("config_echo.toml"))
        .arg("--out-dir")
        .arg(&out_b)
        .output()
        .unwrap()
        .status
        .success());
    for name in ["rima.csv", "ris_noma.csv", "noma.csv", "combined.csv"] {
        assert_eq!(
            fs::read(out_a.join(name)).unwrap(),
            fs::read(out_b.join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn config_errors_exit_nonzero_with_category() {
    let dir = tempfile::tempdir().unwrap();

    let typo = CONFIG.replace("mu = 0.7\nn_e = 24", "powersplit = 0.7\nn_e = 24");
    let config = write_config(dir.path(), &typo);
    let output = Command::new(BIN)
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out-dir")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("error[config/unknown-key]"), "{stderr}");
    assert!(stderr.contains("power_split"), "{stderr}");

    let output = Command::new(BIN)
        .args(["run", "--config", "/does/not/exist.toml", "--out-dir"])
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("error[config/io]"), "{stderr}");

    let bad = CONFIG.replace("n_e = 24\nn_g = 2", "n_e = 10\nn_g = 4");
    let config = write_config(dir.path(), &bad);
    let output = Command::new(BIN)
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out-dir")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("error[config/invalid-value]"), "{stderr}");
    assert!(stderr.contains("n_g") && stderr.contains("n_e"), "{stderr}");
}

#[test]
fn oracle_and_sinr_subcommands_emit_curves() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), CONFIG);

    let out_dir = dir.path().join("oracle");
    let output = Command::new(BIN)
        .args(["oracle", "--config"])
        .arg(&config)
        .arg("--out-dir")
        .arg(&out_dir)
        .args(["--draws", "20000"])
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let closed = fs::read_to_string(out_dir.join("oracle_rayleigh_bpsk.csv")).unwrap();
    assert!(closed.starts_with("snr_db,ber\n"));
    assert_eq!(closed.lines().count(), 4);
    assert!(out_dir.join("oracle_noma_weak_bpsk.csv").exists());

    let out_dir = dir.path().join("sinr");
    let output = Command::new(BIN)
        .args(["sinr", "--config"])
        .arg(&config)
        .arg("--out-dir")
        .arg(&out_dir)
        .args(["--samples", "5000"])
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let sinr = fs::read_to_string(out_dir.join("sinr.csv")).unwrap();
    assert!(sinr.starts_with("scheme,snr_db,mean_sinr,mean_sinr_db\n"));
    assert_eq!(sinr.lines().count(), 1 + 2 * 3);
}
