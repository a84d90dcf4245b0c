//! Thread-parallel sweep driver.
//!
//! Trials are split into fixed sub-ranges and reduced by integer addition,
//! so the result is bit-identical to the serial [`run_sweep`] whatever the
//! worker count. Early stopping is evaluated at the same fixed chunk
//! boundaries the serial loop uses.

use rayon::prelude::*;

use rima_core::harness::{
    assemble_curves, merge_counts, run_point_range, stop_satisfied, BerCurve, PointCounts,
    SweepSpec, EARLY_STOP_CHUNK,
};
use rima_core::Result;

/// Trials handed to one worker task at a time.
const GRAIN: u64 = 512;

fn par_point_range(
    spec: &SweepSpec,
    snr_index: usize,
    start: u64,
    end: u64,
) -> Vec<PointCounts> {
    let identity = || vec![PointCounts::default(); spec.schemes.len()];
    (start..end)
        .step_by(GRAIN as usize)
        .collect::<Vec<u64>>()
        .into_par_iter()
        .map(|lo| run_point_range(spec, snr_index, lo..(lo + GRAIN).min(end)))
        .reduce(identity, |mut acc, delta| {
            merge_counts(&mut acc, &delta);
            acc
        })
}

/// Runs the sweep on a dedicated thread pool. `threads = None` uses all
/// available cores; any value produces identical numbers.
pub fn run_sweep_parallel(spec: &SweepSpec, threads: Option<usize>) -> Result<Vec<BerCurve>> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .expect("thread pool construction");
    pool.install(|| {
        let mut per_point = Vec::with_capacity(spec.snr_grid_db.len());
        for snr_index in 0..spec.snr_grid_db.len() {
            let mut acc = vec![PointCounts::default(); spec.schemes.len()];
            let mut next = 0u64;
            while next < spec.trials_per_point {
                let chunk_end = if spec.min_errors == 0 {
                    spec.trials_per_point
                } else {
                    (next + EARLY_STOP_CHUNK).min(spec.trials_per_point)
                };
                let delta = par_point_range(spec, snr_index, next, chunk_end);
                merge_counts(&mut acc, &delta);
                next = chunk_end;
                if stop_satisfied(&acc, spec.min_errors) {
                    break;
                }
            }
            per_point.push(acc);
        }
        assemble_curves(spec, &per_point)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config_str;
    use rima_core::harness::run_sweep;

    const CONFIG: &str = r#"
seed = 11
snr_grid_db = [0.0, 10.0]
trials_per_point = 3000

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

    #[test]
    fn parallel_matches_serial_for_any_thread_count() {
        let spec = parse_config_str(CONFIG).unwrap().spec;
        let serial = run_sweep(&spec).unwrap();
        for threads in [1, 2, 3, 8] {
            let parallel = run_sweep_parallel(&spec, Some(threads)).unwrap();
            assert_eq!(serial, parallel, "{threads} threads diverged");
        }
        let default_pool = run_sweep_parallel(&spec, None).unwrap();
        assert_eq!(serial, default_pool);
    }

    #[test]
    fn parallel_early_stop_matches_serial() {
        // A small surface keeps every scheme error-rich at -5 dB, so the
        // floor triggers well before the trial budget.
        let text = CONFIG.replace("n_e = 24", "n_e = 8");
        let mut spec = parse_config_str(&text).unwrap().spec;
        spec.snr_grid_db = vec![-5.0];
        spec.trials_per_point = 60_000;
        spec.min_errors = 150;
        let serial = run_sweep(&spec).unwrap();
        let parallel = run_sweep_parallel(&spec, Some(4)).unwrap();
        assert_eq!(serial, parallel);
        for curve in &serial {
            assert!(curve.points[0].bit_errors >= 150);
            assert!(curve.points[0].bits_tested < 60_000, "{}", curve.label);
        }
    }
}
