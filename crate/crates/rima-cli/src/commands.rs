//! Subcommand implementations behind the thin clap front end.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rima_core::channel::{draw_realization, RngStream};
use rima_core::oracle::{noma_weak_bpsk_ber, rayleigh_bpsk_ber};
use rima_core::schemes::{compute_sinr, SinrScheme};
use rima_core::{SchemeKind, Snr};

use crate::config::parse_config;
use crate::emit::{build_manifest, emit_results};
use crate::error::CliError;
use crate::parallel::run_sweep_parallel;

/// Stream-id base for the SINR ensemble, away from sweep trial streams.
const SINR_STREAM_BASE: u64 = 1 << 48;

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

fn ensure_dir(out_dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(out_dir).map_err(|source| CliError::Output {
        path: out_dir.to_path_buf(),
        source,
    })
}

/// `run`: execute the configured sweep and emit curves plus manifest.
pub fn cmd_run(
    config: &Path,
    out_dir: &Path,
    threads: Option<usize>,
) -> Result<Vec<PathBuf>, CliError> {
    let resolved = parse_config(config)?;
    let curves = run_sweep_parallel(&resolved.spec, threads)?;
    let manifest = build_manifest(
        &resolved,
        threads.unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        }),
    );
    emit_results(&curves, &manifest, out_dir)
}

/// `oracle`: emit the reference curves the harness is validated against.
///
/// Writes the closed-form BPSK-over-Rayleigh curve and the semi-analytic
/// weak-user curve under two-user superposition, on the config's SNR grid.
pub fn cmd_oracle(
    config: &Path,
    out_dir: &Path,
    draws: u64,
    mu_override: Option<f64>,
) -> Result<Vec<PathBuf>, CliError> {
    let resolved = parse_config(config)?;
    let mu = match mu_override {
        Some(mu) if mu > 0.0 && mu < 1.0 => mu,
        Some(mu) => return Err(CliError::Usage(format!("--mu {mu} outside (0, 1)"))),
        None => resolved
            .spec
            .schemes
            .iter()
            .find(|s| s.config.scheme.is_noma_family())
            .map(|s| s.config.power_split)
            .ok_or_else(|| {
                CliError::Usage(
                    "oracle needs --mu or a noma-family scheme in the config".into(),
                )
            })?,
    };
    if draws == 0 {
        return Err(CliError::Usage("--draws must be >= 1".into()));
    }
    ensure_dir(out_dir)?;

    let mut closed = String::from("snr_db,ber\n");
    let mut semi = String::from("snr_db,ber,std_error\n");
    for (index, &snr_db) in resolved.spec.snr_grid_db.iter().enumerate() {
        let snr = Snr::from_db(snr_db).linear();
        closed.push_str(&format!("{},{}\n", snr_db, rayleigh_bpsk_ber(snr)));
        let estimate = noma_weak_bpsk_ber(
            mu,
            snr,
            draws,
            resolved.spec.seed.wrapping_add(index as u64),
        );
        semi.push_str(&format!(
            "{},{},{}\n",
            snr_db, estimate.ber, estimate.std_error
        ));
    }

    let closed_path = out_dir.join("oracle_rayleigh_bpsk.csv");
    write_file(&closed_path, &closed)?;
    let semi_path = out_dir.join("oracle_noma_weak_bpsk.csv");
    write_file(&semi_path, &semi)?;
    Ok(vec![closed_path, semi_path])
}

/// `sinr`: average the per-scheme weak-user SINR formulas over a sampled
/// channel ensemble, one row per available scheme and SNR point.
pub fn cmd_sinr(
    config: &Path,
    out_dir: &Path,
    samples: u64,
) -> Result<Vec<PathBuf>, CliError> {
    let resolved = parse_config(config)?;
    if samples == 0 {
        return Err(CliError::Usage("--samples must be >= 1".into()));
    }
    let mu = resolved
        .spec
        .schemes
        .iter()
        .find(|s| s.config.scheme.is_noma_family())
        .map(|s| s.config.power_split);
    let ris = resolved
        .spec
        .schemes
        .iter()
        .find(|s| s.config.scheme == SchemeKind::Rima)
        .and_then(|s| s.ris);
    if mu.is_none() && ris.is_none() {
        return Err(CliError::Usage(
            "sinr needs a noma-family scheme (for the noma row) or a rima scheme (for the rima row) in the config".into(),
        ));
    }
    // The noma row still needs a surface to share the ensemble draw; fall
    // back to any configured surface or a 1-element placeholder.
    let draw_ris = ris
        .or_else(|| resolved.spec.schemes.iter().find_map(|s| s.ris))
        .unwrap_or_else(|| rima_core::RisConfig::new(1, 1, 0.0).expect("static"));
    ensure_dir(out_dir)?;

    let mut out = String::from("scheme,snr_db,mean_sinr,mean_sinr_db\n");
    for (index, &snr_db) in resolved.spec.snr_grid_db.iter().enumerate() {
        let snr = Snr::from_db(snr_db);
        let mut rng = RngStream::new(resolved.spec.seed, SINR_STREAM_BASE + index as u64).rng();
        let mut sum_noma = 0.0f64;
        let mut sum_rima = 0.0f64;
        for _ in 0..samples {
            let realization = draw_realization(&mut rng, &draw_ris, true);
            if let Some(mu) = mu {
                sum_noma += compute_sinr(SinrScheme::Noma, &realization, &draw_ris, mu, snr)?;
            }
            if let Some(r) = &ris {
                sum_rima +=
                    compute_sinr(SinrScheme::Rima, &realization, r, mu.unwrap_or(0.7), snr)?;
            }
        }
        if mu.is_some() {
            let mean = sum_noma / samples as f64;
            out.push_str(&format!(
                "noma,{},{},{}\n",
                snr_db,
                mean,
                10.0 * mean.log10()
            ));
        }
        if ris.is_some() {
            let mean = sum_rima / samples as f64;
            out.push_str(&format!(
                "rima,{},{},{}\n",
                snr_db,
                mean,
                10.0 * mean.log10()
            ));
        }
    }
    let path = out_dir.join("sinr.csv");
    write_file(&path, &out)?;
    Ok(vec![path])
}
