//! Result emission: per-scheme CSVs, a combined long-format CSV, the run
//! manifest, and a re-runnable resolved-config echo.
//!
//! Floats are written with Rust's shortest-round-trip formatting, so
//! re-parsing a CSV reproduces the exact binary values.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use toml::{Table, Value};

use rima_core::harness::BerCurve;

use crate::config::ResolvedConfig;
use crate::error::CliError;

const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const CURVE_HEADER: &str = "snr_db,bit_errors,bits_tested,ber,ci_low,ci_high";

/// Everything needed to reproduce and interpret a run.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub table: Table,
}

/// Assembles the manifest: tool metadata, fixed model conventions,
/// per-scheme metadata, and the resolved config echo.
pub fn build_manifest(resolved: &ResolvedConfig, threads: usize) -> RunManifest {
    let mut meta = Table::new();
    meta.insert("tool".into(), Value::String("rima".into()));
    meta.insert("version".into(), Value::String(VERSION.into()));
    meta.insert(
        "timestamp".into(),
        Value::String(chrono::Utc::now().to_rfc3339()),
    );
    meta.insert("threads".into(), Value::Integer(threads as i64));

    let mut model = Table::new();
    model.insert(
        "cascade".into(),
        Value::String("per-element product of two unit-variance complex Gaussians".into()),
    );
    model.insert(
        "path_loss".into(),
        Value::String("unit-normalized; SNR axis is P_t/P_n with P_t = 1".into()),
    );
    model.insert(
        "noise".into(),
        Value::String("complex AWGN, total power P_n (P_n/2 per real dimension)".into()),
    );
    model.insert(
        "user_ordering".into(),
        Value::String(
            "larger |direct|^2 is primary when direct links are drawn, else larger total cascaded power; ties to the first user".into(),
        ),
    );
    model.insert(
        "group_assignment".into(),
        Value::String("indexing group m holds elements [m*N_R, (m+1)*N_R)".into()),
    );
    model.insert("common_random_numbers".into(), Value::Boolean(true));
    meta.insert("model".into(), Value::Table(model));

    let mut scheme_meta = Vec::new();
    for scheme in &resolved.spec.schemes {
        let mut t = Table::new();
        t.insert("label".into(), Value::String(scheme.label.clone()));
        t.insert(
            "type".into(),
            Value::String(scheme.config.scheme.as_str().into()),
        );
        t.insert(
            "bit_mapping".into(),
            Value::String(scheme.config.secondary_modulation.mapping().as_str().into()),
        );
        if let Some(ris) = &scheme.ris {
            t.insert("leakage".into(), Value::Float(ris.leakage()));
            t.insert(
                "indexing_size".into(),
                Value::Integer(ris.indexing_size() as i64),
            );
        }
        scheme_meta.push(Value::Table(t));
    }
    meta.insert("schemes".into(), Value::Array(scheme_meta));

    let mut table = Table::new();
    table.insert("meta".into(), Value::Table(meta));
    table.insert("config".into(), Value::Table(resolved.echo.clone()));
    RunManifest { table }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    let mut file = fs::File::create(path).map_err(|source| CliError::Output {
        path: path.to_path_buf(),
        source,
    })?;
    file.write_all(contents.as_bytes())
        .map_err(|source| CliError::Output {
            path: path.to_path_buf(),
            source,
        })
}

fn curve_rows(curve: &BerCurve, with_label: bool) -> String {
    let mut out = String::new();
    for p in &curve.points {
        if with_label {
            out.push_str(&curve.label);
            out.push(',');
        }
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            p.snr_db, p.bit_errors, p.bits_tested, p.ber, p.ci_low, p.ci_high
        ));
    }
    out
}

/// Writes one CSV per scheme, a combined long-format CSV, the manifest,
/// and the resolved-config echo. Returns the created paths.
pub fn emit_results(
    curves: &[BerCurve],
    manifest: &RunManifest,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    if curves.is_empty() {
        return Err(CliError::Domain(rima_core::Error::EmptySchemes));
    }
    fs::create_dir_all(out_dir).map_err(|source| CliError::Output {
        path: out_dir.to_path_buf(),
        source,
    })?;

    let mut written = Vec::new();
    for curve in curves {
        let path = out_dir.join(format!("{}.csv", curve.label));
        write_file(&path, &format!("{CURVE_HEADER}\n{}", curve_rows(curve, false)))?;
        written.push(path);
    }

    let mut combined = format!("scheme,{CURVE_HEADER}\n");
    for curve in curves {
        combined.push_str(&curve_rows(curve, true));
    }
    let path = out_dir.join("combined.csv");
    write_file(&path, &combined)?;
    written.push(path);

    let manifest_text = toml::to_string(&manifest.table).expect("manifest serializes");
    let path = out_dir.join("manifest.toml");
    write_file(&path, &manifest_text)?;
    written.push(path);

    let config_table = manifest
        .table
        .get("config")
        .expect("manifest carries the config echo");
    let echo_text = toml::to_string(config_table).expect("echo serializes");
    let path = out_dir.join("config_echo.toml");
    write_file(&path, &echo_text)?;
    written.push(path);

    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config_str;
    use rima_core::harness::run_sweep;

    const CONFIG: &str = r#"
seed = 3
snr_grid_db = [0.0, 10.0]
trials_per_point = 200

[[schemes]]
type = "noma"
mu = 0.7
modulation_order = 2

[[schemes]]
type = "rima"
n_e = 8
n_g = 2
modulation_order = 2
"#;

    #[test]
    fn emits_expected_files_and_shapes() {
        let resolved = parse_config_str(CONFIG).unwrap();
        let curves = run_sweep(&resolved.spec).unwrap();
        let manifest = build_manifest(&resolved, 1);
        let dir = tempfile::tempdir().unwrap();
        let files = emit_results(&curves, &manifest, dir.path()).unwrap();
        assert_eq!(files.len(), 5); // noma.csv, rima.csv, combined, manifest, echo

        let combined = fs::read_to_string(dir.path().join("combined.csv")).unwrap();
        let lines: Vec<&str> = combined.lines().collect();
        assert_eq!(lines[0], "scheme,snr_db,bit_errors,bits_tested,ber,ci_low,ci_high");
        assert_eq!(lines.len(), 1 + 2 * 2); // header + schemes x points

        let per_scheme = fs::read_to_string(dir.path().join("noma.csv")).unwrap();
        assert!(per_scheme.starts_with("snr_db,"));
        assert_eq!(per_scheme.lines().count(), 3);
    }

    #[test]
    fn reruns_are_byte_identical() {
        let resolved = parse_config_str(CONFIG).unwrap();
        let manifest = build_manifest(&resolved, 1);
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        emit_results(&run_sweep(&resolved.spec).unwrap(), &manifest, dir_a.path()).unwrap();
        emit_results(&run_sweep(&resolved.spec).unwrap(), &manifest, dir_b.path()).unwrap();
        for name in ["noma.csv", "rima.csv", "combined.csv", "config_echo.toml"] {
            let a = fs::read(dir_a.path().join(name)).unwrap();
            let b = fs::read(dir_b.path().join(name)).unwrap();
            assert_eq!(a, b, "{name} differs between identical runs");
        }
    }

    #[test]
    fn manifest_echo_reparses_to_same_spec() {
        let resolved = parse_config_str(CONFIG).unwrap();
        let manifest = build_manifest(&resolved, 4);
        let dir = tempfile::tempdir().unwrap();
        emit_results(
            &run_sweep(&resolved.spec).unwrap(),
            &manifest,
            dir.path(),
        )
        .unwrap();
        let echo = fs::read_to_string(dir.path().join("config_echo.toml")).unwrap();
        let reparsed = parse_config_str(&echo).unwrap();
        assert_eq!(reparsed.spec, resolved.spec);
    }

    #[test]
    fn unwritable_directory_is_io_error() {
        let resolved = parse_config_str(CONFIG).unwrap();
        let curves = run_sweep(&resolved.spec).unwrap();
        let manifest = build_manifest(&resolved, 1);
        let err = emit_results(&curves, &manifest, Path::new("/proc/no_such/dir")).unwrap_err();
        assert_eq!(err.category(), "io/output");
    }
}
