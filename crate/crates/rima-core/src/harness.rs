//! Monte Carlo BER estimation over SNR sweeps.
//!
//! All schemes in a sweep share common random numbers: trial `t` at SNR
//! point `k` draws its channel realization, data bits and a noise fork from
//! stream `k * trials_per_point + t`, independent of which scheme consumes
//! them and of how trials are scheduled. Error counts are integers, so any
//! partition of the trial range accumulates to identical results; a
//! parallel driver only needs [`run_point_range`] plus [`merge_counts`].

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitWord;
use crate::channel::{complex_gaussian, draw_cascades, ChannelRealization, RngStream};
use crate::config::{RisConfig, SchemeConfig, SchemeKind, Snr};
use crate::error::Error;
use crate::schemes::{noma_symbol, rima_symbol, ris_noma_symbol};
use crate::Result;

/// Trial chunk between early-stop checks; fixed so stopping points do not
/// depend on the number of workers.
pub const EARLY_STOP_CHUNK: u64 = 4096;

/// One labeled scheme entry of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepScheme {
    pub label: String,
    pub config: SchemeConfig,
    /// Surface configuration; required for the RIS-backed schemes.
    pub ris: Option<RisConfig>,
}

/// Full description of a BER sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Strictly increasing grid of average transmit SNR values, in dB.
    pub snr_grid_db: Vec<f64>,
    pub trials_per_point: u64,
    /// Early-stop floor: once every scheme has at least this many bit
    /// errors at a point, remaining trials are skipped. Zero disables.
    pub min_errors: u64,
    pub seed: u64,
    pub schemes: Vec<SweepScheme>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.schemes.is_empty() {
            return Err(Error::EmptySchemes);
        }
        if self.snr_grid_db.is_empty()
            || self.snr_grid_db.windows(2).any(|w| !(w[1] > w[0]))
        {
            return Err(Error::InvalidSnrGrid);
        }
        if self.trials_per_point == 0 {
            return Err(Error::ZeroTrials);
        }
        let mut shared_elements: Option<usize> = None;
        for scheme in &self.schemes {
            scheme.config.validate()?;
            match scheme.config.scheme {
                SchemeKind::Noma => {}
                SchemeKind::Rima | SchemeKind::RisNoma => {
                    let ris = scheme.ris.as_ref().ok_or(Error::MissingRisConfig)?;
                    if scheme.config.scheme == SchemeKind::Rima
                        && ris.groups() != scheme.config.secondary_modulation.order() as usize
                    {
                        return Err(Error::GroupOrderMismatch {
                            groups: ris.groups(),
                            order: scheme.config.secondary_modulation.order(),
                        });
                    }
                    match shared_elements {
                        None => shared_elements = Some(ris.total_elements()),
                        Some(n) if n == ris.total_elements() => {}
                        Some(_) => return Err(Error::MismatchedSurfaces),
                    }
                }
            }
        }
        Ok(())
    }
}

/// Integer error accumulation for one scheme at one SNR point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PointCounts {
    pub bit_errors: u64,
    pub bits_tested: u64,
}

impl PointCounts {
    pub fn add(&mut self, other: PointCounts) {
        self.bit_errors += other.bit_errors;
        self.bits_tested += other.bits_tested;
    }
}

/// Adds `delta` into `acc`, scheme by scheme.
pub fn merge_counts(acc: &mut [PointCounts], delta: &[PointCounts]) {
    debug_assert_eq!(acc.len(), delta.len());
    for (a, d) in acc.iter_mut().zip(delta) {
        a.add(*d);
    }
}

/// One estimated point of a BER curve.
#[derive(Debug, Clone, PartialEq)]
pub struct BerPoint {
    pub snr_db: f64,
    pub bit_errors: u64,
    pub bits_tested: u64,
    pub ber: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Estimated weak/secondary-user BER curve of one scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct BerCurve {
    pub label: String,
    pub points: Vec<BerPoint>,
}

struct TrialPlan {
    needs_direct: bool,
    shared_elements: usize,
    primary_width: u8,
    secondary_width: u8,
}

fn plan(spec: &SweepSpec) -> TrialPlan {
    let needs_direct = spec.schemes.iter().any(|s| {
        s.config.scheme == SchemeKind::Noma || s.config.direct_link_enabled
    });
    let shared_elements = spec
        .schemes
        .iter()
        .filter_map(|s| s.ris.as_ref())
        .map(|r| r.total_elements())
        .next()
        .unwrap_or(0);
    let primary_width = spec
        .schemes
        .iter()
        .map(|s| s.config.primary_modulation.bits())
        .max()
        .unwrap_or(1);
    let secondary_width = spec
        .schemes
        .iter()
        .map(|s| s.config.secondary_modulation.bits())
        .max()
        .unwrap_or(1);
    TrialPlan {
        needs_direct,
        shared_elements,
        primary_width,
        secondary_width,
    }
}

/// Runs a contiguous trial range of one SNR point, returning per-scheme
/// counts. The spec must already be validated.
///
/// Shared draws per trial, in order: direct links (when any scheme uses
/// them), both users' cascades, the primary word, the secondary word, and
/// a fork seed for the noise; every scheme replays noise from the same
/// fork, so compared curves differ only in their transceivers.
pub fn run_point_range(
    spec: &SweepSpec,
    snr_index: usize,
    trials: Range<u64>,
) -> Vec<PointCounts> {
    let plan = plan(spec);
    let snr = Snr::from_db(spec.snr_grid_db[snr_index]);
    let mut counts = vec![PointCounts::default(); spec.schemes.len()];

    for trial in trials {
        let stream = RngStream::new(
            spec.seed,
            snr_index as u64 * spec.trials_per_point + trial,
        );
        let mut rng = stream.rng();

        let zero = num_complex::Complex64::new(0.0, 0.0);
        let (direct_s, direct_w) = if plan.needs_direct {
            (complex_gaussian(&mut rng), complex_gaussian(&mut rng))
        } else {
            (zero, zero)
        };
        let realization = ChannelRealization {
            direct_s,
            direct_w,
            cascade_s: draw_cascades(&mut rng, plan.shared_elements),
            cascade_w: draw_cascades(&mut rng, plan.shared_elements),
        }
        .oriented();

        let primary_full = BitWord::random(&mut rng, plan.primary_width);
        let secondary_full = BitWord::random(&mut rng, plan.secondary_width);
        let noise_fork = rng.next_u64();

        for (scheme_index, scheme) in spec.schemes.iter().enumerate() {
            let cfg = &scheme.config;
            let primary_word = primary_full.prefix(cfg.primary_modulation.bits());
            let secondary_word = secondary_full.prefix(cfg.secondary_modulation.bits());
            let mut noise_rng = ChaCha8Rng::seed_from_u64(noise_fork);
            let outcome = match cfg.scheme {
                SchemeKind::Rima => rima_symbol(
                    &realization,
                    primary_word,
                    secondary_word,
                    scheme.ris.as_ref().expect("validated"),
                    cfg,
                    snr,
                    &mut noise_rng,
                ),
                SchemeKind::Noma => noma_symbol(
                    &realization,
                    secondary_word,
                    primary_word,
                    cfg.power_split,
                    cfg,
                    snr,
                    &mut noise_rng,
                ),
                SchemeKind::RisNoma => ris_noma_symbol(
                    &realization,
                    secondary_word,
                    primary_word,
                    cfg.power_split,
                    scheme.ris.as_ref().expect("validated"),
                    cfg,
                    snr,
                    &mut noise_rng,
                ),
            }
            .expect("validated sweep spec yields valid symbol calls");
            let sent = outcome.sent_secondary[0];
            let decoded = outcome.decoded_secondary[0];
            counts[scheme_index].bit_errors += sent.hamming_distance(&decoded) as u64;
            counts[scheme_index].bits_tested += sent.width() as u64;
        }
    }
    counts
}

/// Whether every scheme reached the early-stop error floor.
pub fn stop_satisfied(counts: &[PointCounts], min_errors: u64) -> bool {
    min_errors > 0 && counts.iter().all(|c| c.bit_errors >= min_errors)
}

/// Builds the final curves from accumulated per-point, per-scheme counts
/// (`per_point[snr_index][scheme_index]`), with 95% Wilson intervals.
pub fn assemble_curves(
    spec: &SweepSpec,
    per_point: &[Vec<PointCounts>],
) -> Result<Vec<BerCurve>> {
    let mut curves: Vec<BerCurve> = spec
        .schemes
        .iter()
        .map(|s| BerCurve {
            label: s.label.clone(),
            points: Vec::with_capacity(spec.snr_grid_db.len()),
        })
        .collect();
    for (snr_index, counts) in per_point.iter().enumerate() {
        for (scheme_index, c) in counts.iter().enumerate() {
            let (ci_low, ci_high) = wilson_interval(c.bit_errors, c.bits_tested, 0.95)?;
            curves[scheme_index].points.push(BerPoint {
                snr_db: spec.snr_grid_db[snr_index],
                bit_errors: c.bit_errors,
                bits_tested: c.bits_tested,
                ber: c.bit_errors as f64 / c.bits_tested as f64,
                ci_low,
                ci_high,
            });
        }
    }
    Ok(curves)
}

/// Runs the full sweep serially.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<BerCurve>> {
    spec.validate()?;
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
            let delta = run_point_range(spec, snr_index, next..chunk_end);
            merge_counts(&mut acc, &delta);
            next = chunk_end;
            if stop_satisfied(&acc, spec.min_errors) {
                break;
            }
        }
        per_point.push(acc);
    }
    assemble_curves(spec, &per_point)
}

/// Quantile of the standard normal distribution.
///
/// Rational approximation refined by one Halley step against the exact
/// CDF, accurate to machine precision everywhere we evaluate it.
fn normal_quantile(p: f64) -> f64 {
    debug_assert!(p > 0.0 && p < 1.0);
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    let x = if p < P_LOW {
        let q = libm::sqrt(-2.0 * libm::log(p));
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = libm::sqrt(-2.0 * libm::log(1.0 - p));
        -((((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0))
    };

    // Halley refinement: e = Phi(x) - p.
    let e = 0.5 * libm::erfc(-x / core::f64::consts::SQRT_2) - p;
    let u = e * libm::sqrt(2.0 * core::f64::consts::PI) * libm::exp(x * x / 2.0);
    x - u / (1.0 + x * u / 2.0)
}

/// Wilson score interval for a binomial proportion, clamped to `[0, 1]`.
pub fn wilson_interval(errors: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    if trials == 0 || errors > trials || !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::InvalidInterval);
    }
    let z = normal_quantile(0.5 + confidence / 2.0);
    let n = trials as f64;
    let p_hat = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p_hat + z2 / (2.0 * n)) / denom;
    let half = z * libm::sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n)) / denom;
    Ok(((center - half).max(0.0), (center + half).min(1.0)))
}
