//! Symbol mapping, coherent ML detection, and successive interference
//! cancellation.
//!
//! Noise convention: a received sample carries complex AWGN of total power
//! `P_n` (`P_n/2` per real dimension), and transmit SNR is `P_t / P_n` with
//! `P_t` normalized to one. Detection assumes the receiver knows its
//! effective channel exactly.

use num_complex::Complex64;

use crate::bits::BitWord;
use crate::config::TX_POWER;
use crate::psk::PskConstellation;
use crate::Result;

/// One complex baseband observation and the noise power it carries.
///
/// `noise_var = 0` is allowed for noiseless exactness checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceivedSample {
    pub value: Complex64,
    pub noise_var: f64,
}

impl ReceivedSample {
    pub fn new(value: Complex64, noise_var: f64) -> Self {
        Self { value, noise_var }
    }
}

/// Maps a bit word onto its unit-modulus constellation point.
pub fn modulate(word: &BitWord, constellation: &PskConstellation) -> Result<Complex64> {
    let index = constellation.index_of(word)?;
    Ok(constellation.point(index))
}

/// Coherent maximum-likelihood detection for equal-energy constellations.
///
/// Returns the label of the phase maximizing
/// `Re{ y * conj(effective_channel * e^{j phi_m}) }`; ties (including a zero
/// effective channel) resolve toward the smallest index.
pub fn ml_detect(
    y: &ReceivedSample,
    effective_channel: Complex64,
    constellation: &PskConstellation,
) -> BitWord {
    let mut best_index = 0u32;
    let mut best_score = f64::NEG_INFINITY;
    for m in 0..constellation.order() {
        let hypothesis = effective_channel * constellation.point(m);
        let score = (y.value * hypothesis.conj()).re;
        if score > best_score {
            best_score = score;
            best_index = m;
        }
    }
    constellation.label(best_index)
}

/// Successive interference cancellation at the strong user.
///
/// The input is assumed to be the superposition
/// `channel * (sqrt(mu P_t) x_w + sqrt((1-mu) P_t) x_s)` plus noise. The weak
/// word is detected first with the strong component treated as noise, its
/// reconstruction is subtracted, and the strong word is detected from the
/// residual. Returns `(weak word, strong word)`.
pub fn sic_decode(
    y: &ReceivedSample,
    channel: Complex64,
    mu: f64,
    cons_w: &PskConstellation,
    cons_s: &PskConstellation,
) -> (BitWord, BitWord) {
    let weak_amp = libm::sqrt(mu * TX_POWER);
    let strong_amp = libm::sqrt((1.0 - mu) * TX_POWER);

    let weak_word = ml_detect(y, channel * weak_amp, cons_w);
    let weak_symbol = modulate(&weak_word, cons_w).expect("detected word matches constellation");
    let residual = ReceivedSample::new(y.value - channel * weak_amp * weak_symbol, y.noise_var);
    let strong_word = ml_detect(&residual, channel * strong_amp, cons_s);
    (weak_word, strong_word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{awgn_sample, complex_gaussian, RngStream};
    use crate::psk::{make_psk, make_psk_with_mapping, BitMapping};
    use crate::Error;
    use proptest::prelude::*;

    #[test]
    fn bpsk_anchors() {
        let bpsk = make_psk(2).unwrap();
        let zero = modulate(&BitWord::new(0, 1).unwrap(), &bpsk).unwrap();
        let one = modulate(&BitWord::new(1, 1).unwrap(), &bpsk).unwrap();
        assert!((zero - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((one - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn all_symbols_unit_modulus() {
        let cons = make_psk(8).unwrap();
        for m in 0..8 {
            let s = modulate(&cons.label(m), &cons).unwrap();
            assert!((s.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn modulate_rejects_width_mismatch() {
        let cons = make_psk(4).unwrap();
        let word = BitWord::new(1, 3).unwrap();
        assert_eq!(
            modulate(&word, &cons).unwrap_err(),
            Error::WidthMismatch { expected: 2, got: 3 }
        );
    }

    #[test]
    fn noiseless_round_trip_all_orders() {
        let mut rng = RngStream::new(77, 0).rng();
        for b in 1..=8u32 {
            let m = 1u32 << b;
            for mapping in [BitMapping::Gray, BitMapping::Natural] {
                let cons = make_psk_with_mapping(m, mapping).unwrap();
                let eff = complex_gaussian(&mut rng);
                for idx in 0..m {
                    let word = cons.label(idx);
                    let x = modulate(&word, &cons).unwrap();
                    let y = ReceivedSample::new(eff * x, 0.0);
                    assert_eq!(ml_detect(&y, eff, &cons), word, "order {m} index {idx}");
                }
            }
        }
    }

    #[test]
    fn specific_noiseless_index() {
        let cons = make_psk(8).unwrap();
        let eff = Complex64::new(0.3, -1.2);
        let y = ReceivedSample::new(eff * Complex64::from_polar(1.0, cons.phase(3)), 0.0);
        assert_eq!(ml_detect(&y, eff, &cons), cons.label(3));
    }

    #[test]
    fn zero_channel_yields_first_label_and_word_error_rate() {
        // All hypotheses score zero, so the tie-break returns index 0; on
        // uniform data the word error rate is then (M-1)/M.
        let cons = make_psk(8).unwrap();
        let mut rng = RngStream::new(13, 0).rng();
        let trials = 100_000u32;
        let mut word_errors = 0u32;
        for _ in 0..trials {
            let word = BitWord::random(&mut rng, 3);
            let y = ReceivedSample::new(awgn_sample(&mut rng, 1.0), 1.0);
            let decoded = ml_detect(&y, Complex64::new(0.0, 0.0), &cons);
            assert_eq!(decoded, cons.label(0));
            if decoded != word {
                word_errors += 1;
            }
        }
        let rate = word_errors as f64 / trials as f64;
        let expected = 7.0 / 8.0;
        let se = libm::sqrt(expected * (1.0 - expected) / trials as f64);
        assert!((rate - expected).abs() < 3.0 * se, "rate {rate}");
    }

    /// Average BPSK error rate over a unit-power Rayleigh channel with mean
    /// SNR `snr`: `0.5 (1 - sqrt(snr / (1 + snr)))`.
    fn rayleigh_bpsk_closed_form(snr: f64) -> f64 {
        0.5 * (1.0 - libm::sqrt(snr / (1.0 + snr)))
    }

    #[test]
    fn closed_form_matches_independent_quadrature() {
        // Average Q(sqrt(2 snr x)) over x ~ Exp(1) by Simpson's rule under
        // u = sqrt(x) (smooth integrand), with statrs' erfc.
        use statrs::function::erf::erfc;
        for snr_db in [0.0, 10.0, 20.0] {
            let snr = libm::pow(10.0, snr_db / 10.0);
            let q = |x: f64| 0.5 * erfc(x / core::f64::consts::SQRT_2);
            let f = |u: f64| q(libm::sqrt(2.0 * snr) * u) * libm::exp(-u * u) * 2.0 * u;
            let (a, b, n) = (0.0f64, 8.0f64, 16_000usize);
            let h = (b - a) / n as f64;
            let mut integral = f(a) + f(b);
            for i in 1..n {
                let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
                integral += weight * f(a + i as f64 * h);
            }
            integral *= h / 3.0;
            let closed = rayleigh_bpsk_closed_form(snr);
            assert!(
                (integral - closed).abs() < 1e-9,
                "snr {snr_db} dB: quadrature {integral} vs closed form {closed}"
            );
        }
    }

    #[test]
    fn rayleigh_bpsk_monte_carlo_matches_closed_form() {
        let bpsk = make_psk(2).unwrap();
        let trials = 100_000u32;
        for (point, snr_db) in [5.0, 15.0].into_iter().enumerate() {
            let snr = libm::pow(10.0, snr_db / 10.0);
            let noise_var = 1.0 / snr;
            let mut rng = RngStream::new(2024, point as u64).rng();
            let mut errors = 0u32;
            for _ in 0..trials {
                let h = complex_gaussian(&mut rng);
                let word = BitWord::random(&mut rng, 1);
                let x = modulate(&word, &bpsk).unwrap();
                let y = ReceivedSample::new(h * x + awgn_sample(&mut rng, noise_var), noise_var);
                if ml_detect(&y, h, &bpsk) != word {
                    errors += 1;
                }
            }
            let ber = errors as f64 / trials as f64;
            let expected = rayleigh_bpsk_closed_form(snr);
            let se = libm::sqrt(expected * (1.0 - expected) / trials as f64);
            assert!(
                (ber - expected).abs() < 3.0 * se,
                "snr {snr_db} dB: ber {ber} vs {expected} (se {se})"
            );
        }
    }

    #[test]
    fn sic_noiseless_exhaustive_bpsk() {
        let bpsk = make_psk(2).unwrap();
        let channel = Complex64::new(0.4, -0.8);
        let mu = 0.7f64;
        for w in 0..2u32 {
            for s in 0..2u32 {
                let word_w = BitWord::new(w, 1).unwrap();
                let word_s = BitWord::new(s, 1).unwrap();
                let x_w = modulate(&word_w, &bpsk).unwrap();
                let x_s = modulate(&word_s, &bpsk).unwrap();
                let y = ReceivedSample::new(
                    channel * (libm::sqrt(mu) * x_w + libm::sqrt(1.0 - mu) * x_s),
                    0.0,
                );
                let (got_w, got_s) = sic_decode(&y, channel, mu, &bpsk, &bpsk);
                assert_eq!(got_w, word_w);
                assert_eq!(got_s, word_s);
            }
        }
    }

    #[test]
    fn equal_split_cancellation_resolves_by_tie_break() {
        // mu = 1/2 with opposed BPSK words collapses the sample to zero, so
        // the first-stage statistic ties and index 0 wins.
        let bpsk = make_psk(2).unwrap();
        let channel = Complex64::new(1.0, 0.5);
        let word_w = BitWord::new(1, 1).unwrap();
        let word_s = BitWord::new(0, 1).unwrap();
        let x_w = modulate(&word_w, &bpsk).unwrap();
        let x_s = modulate(&word_s, &bpsk).unwrap();
        let y = ReceivedSample::new(
            channel * (libm::sqrt(0.5) * x_w + libm::sqrt(0.5) * x_s),
            0.0,
        );
        assert!(y.value.norm() < 1e-15);
        let (got_w, _) = sic_decode(&y, channel, 0.5, &bpsk, &bpsk);
        assert_eq!(got_w, bpsk.label(0));
    }

    #[test]
    fn forced_wrong_first_stage_residual_magnitude() {
        let channel = Complex64::new(-0.6, 1.1);
        let mu = 0.7f64;
        let a = libm::sqrt(mu);
        let b = libm::sqrt(1.0 - mu);
        let x_w = Complex64::new(1.0, 0.0);
        let x_s = Complex64::new(-1.0, 0.0);
        let wrong = Complex64::new(-1.0, 0.0); // forced wrong weak decision
        let y = channel * (a * x_w + b * x_s);
        let residual = y - channel * a * wrong;
        let expected = channel.norm() * (a * (x_w - wrong) + b * x_s).norm();
        assert!((residual.norm() - expected).abs() < 1e-12);
    }

    #[test]
    fn sic_beats_interference_limited_weak_user() {
        // Ordered channel pair at 30 dB: the strong user's post-SIC error
        // rate sits well below the weak user's interference-as-noise rate.
        let bpsk = make_psk(2).unwrap();
        let mu = 0.7f64;
        let noise_var = 1e-3;
        let a = libm::sqrt(mu);
        let b = libm::sqrt(1.0 - mu);
        let mut rng = RngStream::new(404, 0).rng();
        let trials = 100_000u32;
        let mut weak_errors = 0u32;
        let mut strong_errors = 0u32;
        for _ in 0..trials {
            let c1 = complex_gaussian(&mut rng);
            let c2 = complex_gaussian(&mut rng);
            let (h_s, h_w) = if c1.norm_sqr() >= c2.norm_sqr() {
                (c1, c2)
            } else {
                (c2, c1)
            };
            let word_w = BitWord::random(&mut rng, 1);
            let word_s = BitWord::random(&mut rng, 1);
            let x_w = modulate(&word_w, &bpsk).unwrap();
            let x_s = modulate(&word_s, &bpsk).unwrap();
            let tx = a * x_w + b * x_s;
            let y_w = ReceivedSample::new(h_w * tx + awgn_sample(&mut rng, noise_var), noise_var);
            let y_s = ReceivedSample::new(h_s * tx + awgn_sample(&mut rng, noise_var), noise_var);
            if ml_detect(&y_w, h_w * a, &bpsk) != word_w {
                weak_errors += 1;
            }
            let (_, got_s) = sic_decode(&y_s, h_s, mu, &bpsk, &bpsk);
            if got_s != word_s {
                strong_errors += 1;
            }
        }
        assert!(
            strong_errors < weak_errors,
            "strong {strong_errors} vs weak {weak_errors}"
        );
    }

    proptest! {
        #[test]
        fn ml_detect_scale_invariant(
            scale in 1e-6f64..1e6,
            re in -2.0f64..2.0,
            im in -2.0f64..2.0,
            yre in -3.0f64..3.0,
            yim in -3.0f64..3.0,
        ) {
            let cons = make_psk(8).unwrap();
            let eff = Complex64::new(re, im);
            let y = ReceivedSample::new(Complex64::new(yre, yim), 1.0);
            let scaled = ReceivedSample::new(y.value * scale, 1.0);
            prop_assert_eq!(
                ml_detect(&y, eff, &cons),
                ml_detect(&scaled, eff * scale, &cons)
            );
        }

        #[test]
        fn ml_detect_rotation_covariant(
            angle in 0.0f64..core::f64::consts::TAU,
            re in -2.0f64..2.0,
            im in -2.0f64..2.0,
            yre in -3.0f64..3.0,
            yim in -3.0f64..3.0,
        ) {
            let cons = make_psk(8).unwrap();
            let q = Complex64::from_polar(1.0, angle);
            let eff = Complex64::new(re, im);
            let y = ReceivedSample::new(Complex64::new(yre, yim), 1.0);
            let rotated = ReceivedSample::new(y.value * q, 1.0);
            prop_assert_eq!(
                ml_detect(&y, eff, &cons),
                ml_detect(&rotated, eff * q, &cons)
            );
        }
    }
}
