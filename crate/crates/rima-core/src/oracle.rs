//! Analytic and semi-analytic error-rate references.
//!
//! These exist to validate the Monte Carlo harness and deliberately avoid
//! the simulation path: channel powers are drawn by inverse-CDF exponential
//! sampling (not the Gaussian route), and error probabilities come from the
//! Gaussian tail function instead of detecting symbols.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Gaussian tail probability `Q(x) = P(N(0,1) > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / core::f64::consts::SQRT_2)
}

/// Closed-form BPSK error rate over a unit-power Rayleigh channel with
/// coherent detection at mean SNR `snr`.
pub fn rayleigh_bpsk_ber(snr: f64) -> f64 {
    if snr.is_infinite() {
        return 0.0;
    }
    0.5 * (1.0 - libm::sqrt(snr / (1.0 + snr)))
}

/// A semi-analytic estimate and its Monte Carlo standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEstimate {
    pub ber: f64,
    pub std_error: f64,
}

/// Uniform draw on (0, 1], safe to feed a logarithm.
fn uniform_open<R: RngCore>(rng: &mut R) -> f64 {
    (((rng.next_u64() >> 11) + 1) as f64) * (1.0 / (1u64 << 53) as f64)
}

/// Semi-analytic weak-user BPSK error rate under two-user superposition.
///
/// Conditions on the weak channel power `x = min(X1, X2)` of an ordered
/// i.i.d. unit-mean exponential pair and averages the exact conditional
/// error probability, with the interfering bit equally likely to add or
/// oppose:
///
/// `P(err | x) = 1/2 Q(sqrt(2 x snr) (sqrt(mu) + sqrt(1-mu)))
///             + 1/2 Q(sqrt(2 x snr) (sqrt(mu) - sqrt(1-mu)))`
///
/// Channel powers are sampled as `-ln(U)` from a dedicated stream, keeping
/// this estimate independent of the simulation's Gaussian draws.
pub fn noma_weak_bpsk_ber(mu: f64, snr: f64, draws: u64, seed: u64) -> OracleEstimate {
    let a = libm::sqrt(mu);
    let b = libm::sqrt(1.0 - mu);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..draws {
        let x1 = -libm::log(uniform_open(&mut rng));
        let x2 = -libm::log(uniform_open(&mut rng));
        let weak_power = if x1 < x2 { x1 } else { x2 };
        let scale = libm::sqrt(2.0 * weak_power * snr);
        let p = 0.5 * q_function(scale * (a + b)) + 0.5 * q_function(scale * (a - b));
        sum += p;
        sum_sq += p * p;
    }
    let n = draws as f64;
    let mean = sum / n;
    let variance = (sum_sq / n - mean * mean).max(0.0);
    OracleEstimate {
        ber: mean,
        std_error: libm::sqrt(variance / n),
    }
}
