//! End-to-end single-symbol transceiver chains.
//!
//! Three downlink schemes share one signal model. With transmit power `P_t`
//! and per-user channels drawn by the `channel` module:
//!
//! * **NOMA** superimposes `sqrt(mu P_t) x_w + sqrt((1-mu) P_t) x_s` on the
//!   scalar direct links; the weak user detects through the interference,
//!   the strong user runs SIC.
//! * **RIS-NOMA** sends the same superposition but through cascaded surface
//!   links, with every element co-phased to the weak (target) user.
//! * **RIMA** transmits only the primary signal at full power. The weak
//!   user's bits pick which indexing group is active and the angle its
//!   reflected phasor is steered to; the remaining elements co-phase toward
//!   the primary user and are nulled (up to a leakage fraction) toward the
//!   secondary. The controller knows the instantaneous data, so the active
//!   phases also absorb the primary symbol's angle; the secondary observes
//!   a clean constellation point scaled by the coherent sum of its active
//!   cascade magnitudes.
//!
//! Per-symbol noise is drawn weak/secondary user first, then the primary,
//! so schemes sharing a forked noise stream see identical draws.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;
use core::ops::Range;

use num_complex::Complex64;
use rand::Rng;

use crate::bits::BitWord;
use crate::channel::{awgn_sample, ChannelRealization};
use crate::config::{RisConfig, SchemeConfig, Snr, TX_POWER};
use crate::error::Error;
use crate::modem::{ml_detect, modulate, sic_decode, ReceivedSample};
use crate::psk::{make_psk_with_mapping, PskConstellation};
use crate::Result;

/// Per-element phase program for one symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct RisPhaseProfile {
    /// Applied phase of each element, in `[0, 2*pi)`.
    pub phases: Vec<f64>,
    /// `true` for the elements indexing the secondary user this symbol.
    pub active_mask: Vec<bool>,
}

/// Everything one symbol did: transmitted words, received samples, decisions.
///
/// The secondary vectors hold one entry per secondary user (one for the
/// pairwise schemes, one per partition entry in multi-user mode).
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolOutcome {
    pub sent_primary: BitWord,
    pub decoded_primary: BitWord,
    pub received_primary: ReceivedSample,
    pub sent_secondary: Vec<BitWord>,
    pub decoded_secondary: Vec<BitWord>,
    pub received_secondary: Vec<ReceivedSample>,
}

/// One secondary user's slice of the surface in multi-user mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionEntry {
    /// Bits carried for this user; it detects over an order-`2^bit_width`
    /// phase sub-codebook.
    pub bit_width: u8,
    /// Contiguous element pool owned by this user, split into
    /// `2^bit_width` indexing groups.
    pub pool: Range<usize>,
}

fn wrap_phase(x: f64) -> f64 {
    let r = x % TAU;
    let r = if r < 0.0 { r + TAU } else { r };
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Builds the RIMA phase program serving secondary constellation point `m`.
///
/// Active elements (indexing group `m`) are tuned to
/// `phi_m - arg(cascade_w_i) - arg(x_s)`, so the secondary's noiseless
/// phasor lands exactly on `sqrt(P_t) * sum(|cascade_w_i|) * e^{j phi_m}`.
/// The rest co-phase the primary's cascades: `-arg(cascade_s_i)`.
pub fn rima_phase_profile(
    realization: &ChannelRealization,
    secondary_index: u32,
    primary_symbol: Complex64,
    ris: &RisConfig,
    constellation: &PskConstellation,
) -> RisPhaseProfile {
    let n = ris.total_elements();
    debug_assert_eq!(realization.cascade_w.len(), n);
    debug_assert!((secondary_index as usize) < ris.groups());
    let target_phase = constellation.phase(secondary_index);
    let primary_angle = primary_symbol.arg();
    let active = ris.group_range(secondary_index as usize);
    let mut phases = Vec::with_capacity(n);
    let mut active_mask = Vec::with_capacity(n);
    for i in 0..n {
        if active.contains(&i) {
            phases.push(wrap_phase(
                target_phase - realization.cascade_w[i].arg() - primary_angle,
            ));
            active_mask.push(true);
        } else {
            phases.push(wrap_phase(-realization.cascade_s[i].arg()));
            active_mask.push(false);
        }
    }
    RisPhaseProfile {
        phases,
        active_mask,
    }
}

/// Reflected sums seen through one user's cascades under a phase profile,
/// split into the active part and everything else.
fn reflected_sums(
    cascades: &[Complex64],
    profile: &RisPhaseProfile,
) -> (Complex64, Complex64) {
    let mut active = Complex64::new(0.0, 0.0);
    let mut rest = Complex64::new(0.0, 0.0);
    for (i, c) in cascades.iter().enumerate() {
        let term = c * Complex64::from_polar(1.0, profile.phases[i]);
        if profile.active_mask[i] {
            active += term;
        } else {
            rest += term;
        }
    }
    (active, rest)
}

/// RIMA single-symbol chain. The full power serves the primary word while
/// the secondary word rides in the surface configuration; no power split.
pub fn rima_symbol<R: Rng + ?Sized>(
    realization: &ChannelRealization,
    primary_word: BitWord,
    secondary_word: BitWord,
    ris: &RisConfig,
    cfg: &SchemeConfig,
    snr: Snr,
    rng: &mut R,
) -> Result<SymbolOutcome> {
    debug_assert_eq!(cfg.secondary_modulation.order() as usize, ris.groups());
    let amp = libm::sqrt(TX_POWER);
    let noise_var = snr.noise_power();
    let cons_s = &cfg.secondary_modulation;
    let cons_p = &cfg.primary_modulation;

    let m = cons_s.index_of(&secondary_word)?;
    let x_s = modulate(&primary_word, cons_p)?;
    let profile = rima_phase_profile(realization, m, x_s, ris, cons_s);

    // Secondary user: aligned active phasor plus leakage of everything else.
    let (active_w, rest_w) = reflected_sums(&realization.cascade_w, &profile);
    let mut y_w = amp * x_s * (active_w + ris.leakage() * rest_w);
    if cfg.direct_link_enabled {
        y_w += amp * x_s * realization.direct_w;
    }
    let y_w = ReceivedSample::new(y_w + awgn_sample(rng, noise_var), noise_var);

    // Primary user: all reflections arrive; the active groups' phases serve
    // the secondary, so their contribution is a data-independent offset the
    // coordinating receiver knows and removes.
    let (active_p, assist_p) = reflected_sums(&realization.cascade_s, &profile);
    let mut effective_p = amp * assist_p;
    if cfg.direct_link_enabled {
        effective_p += amp * realization.direct_s;
    }
    let y_p_signal = amp * x_s * (active_p + assist_p)
        + if cfg.direct_link_enabled {
            amp * x_s * realization.direct_s
        } else {
            Complex64::new(0.0, 0.0)
        };
    let y_p = ReceivedSample::new(y_p_signal + awgn_sample(rng, noise_var), noise_var);

    // Known indexing offset: active cascades rotated to phi_m minus their
    // own secondary-channel angle (no dependence on the primary symbol).
    let offset: Complex64 = ris
        .group_range(m as usize)
        .map(|i| {
            realization.cascade_s[i]
                * Complex64::from_polar(
                    1.0,
                    cons_s.phase(m) - realization.cascade_w[i].arg(),
                )
        })
        .sum();

    // Secondary detection: phase-codebook ML with the known composite
    // amplitude of its own active cascades.
    let known_amp: f64 = ris
        .group_range(m as usize)
        .map(|i| realization.cascade_w[i].norm())
        .sum();
    let decoded_secondary = ml_detect(&y_w, Complex64::new(amp * known_amp, 0.0), cons_s);
    let corrected = ReceivedSample::new(y_p.value - amp * offset, noise_var);
    let decoded_primary = ml_detect(&corrected, effective_p, cons_p);

    Ok(SymbolOutcome {
        sent_primary: primary_word,
        decoded_primary,
        received_primary: y_p,
        sent_secondary: vec![secondary_word],
        decoded_secondary: vec![decoded_secondary],
        received_secondary: vec![y_w],
    })
}

/// Conventional two-user NOMA over the scalar direct links.
///
/// The weak user detects its word with the strong signal treated as noise
/// (no SIC); the strong user cancels the weak signal first.
pub fn noma_symbol<R: Rng + ?Sized>(
    realization: &ChannelRealization,
    weak_word: BitWord,
    strong_word: BitWord,
    mu: f64,
    cfg: &SchemeConfig,
    snr: Snr,
    rng: &mut R,
) -> Result<SymbolOutcome> {
    let noise_var = snr.noise_power();
    let cons_w = &cfg.secondary_modulation;
    let cons_s = &cfg.primary_modulation;
    let weak_amp = libm::sqrt(mu * TX_POWER);
    let strong_amp = libm::sqrt((1.0 - mu) * TX_POWER);

    let x_w = modulate(&weak_word, cons_w)?;
    let x_s = modulate(&strong_word, cons_s)?;
    let tx = weak_amp * x_w + strong_amp * x_s;

    let y_w = ReceivedSample::new(
        realization.direct_w * tx + awgn_sample(rng, noise_var),
        noise_var,
    );
    let y_s = ReceivedSample::new(
        realization.direct_s * tx + awgn_sample(rng, noise_var),
        noise_var,
    );

    let decoded_weak = ml_detect(&y_w, realization.direct_w * weak_amp, cons_w);
    let (_, decoded_strong) = sic_decode(&y_s, realization.direct_s, mu, cons_w, cons_s);

    Ok(SymbolOutcome {
        sent_primary: strong_word,
        decoded_primary: decoded_strong,
        received_primary: y_s,
        sent_secondary: vec![weak_word],
        decoded_secondary: vec![decoded_weak],
        received_secondary: vec![y_w],
    })
}

/// RIS-assisted NOMA: the same superposition as [`noma_symbol`], routed
/// through the surface with every element co-phased to the weak user.
pub fn ris_noma_symbol<R: Rng + ?Sized>(
    realization: &ChannelRealization,
    weak_word: BitWord,
    strong_word: BitWord,
    mu: f64,
    ris: &RisConfig,
    cfg: &SchemeConfig,
    snr: Snr,
    rng: &mut R,
) -> Result<SymbolOutcome> {
    debug_assert_eq!(realization.cascade_w.len(), ris.total_elements());
    let noise_var = snr.noise_power();
    let cons_w = &cfg.secondary_modulation;
    let cons_s = &cfg.primary_modulation;
    let weak_amp = libm::sqrt(mu * TX_POWER);
    let strong_amp = libm::sqrt((1.0 - mu) * TX_POWER);

    let x_w = modulate(&weak_word, cons_w)?;
    let x_s = modulate(&strong_word, cons_s)?;
    let tx = weak_amp * x_w + strong_amp * x_s;

    // Co-phasing to the weak user turns its composite into the coherent sum
    // of magnitudes; the strong user sees the same phases uncompensated.
    let mut composite_w = Complex64::new(0.0, 0.0);
    let mut composite_s = Complex64::new(0.0, 0.0);
    for i in 0..ris.total_elements() {
        let rotation = Complex64::from_polar(1.0, -realization.cascade_w[i].arg());
        composite_w += realization.cascade_w[i] * rotation;
        composite_s += realization.cascade_s[i] * rotation;
    }
    let channel_w = if cfg.direct_link_enabled {
        composite_w + realization.direct_w
    } else {
        composite_w
    };
    let channel_s = if cfg.direct_link_enabled {
        composite_s + realization.direct_s
    } else {
        composite_s
    };

    let y_w = ReceivedSample::new(channel_w * tx + awgn_sample(rng, noise_var), noise_var);
    let y_s = ReceivedSample::new(channel_s * tx + awgn_sample(rng, noise_var), noise_var);

    let decoded_weak = ml_detect(&y_w, channel_w * weak_amp, cons_w);
    let (_, decoded_strong) = sic_decode(&y_s, channel_s, mu, cons_w, cons_s);

    Ok(SymbolOutcome {
        sent_primary: strong_word,
        decoded_primary: decoded_strong,
        received_primary: y_s,
        sent_secondary: vec![weak_word],
        decoded_secondary: vec![decoded_weak],
        received_secondary: vec![y_w],
    })
}

/// Multi-user RIMA: the surface's bit capacity is split across several
/// secondary users, each owning a disjoint element pool.
///
/// Each user's pool is divided into `2^bit_width` indexing groups; the
/// user's word selects the group and the angle, exactly as in the
/// single-user chain. Elements outside all active groups co-phase the
/// primary user, and every contribution a secondary user does not own is
/// suppressed to the leakage fraction. `extra_secondary_cascades` supplies
/// the cascaded channels of users beyond the first (which uses the
/// realization's weak-user slot); a one-entry partition over the whole
/// surface reproduces [`rima_symbol`] draw for draw.
pub fn rima_multiuser_symbol<R: Rng + ?Sized>(
    realization: &ChannelRealization,
    extra_secondary_cascades: &[Vec<Complex64>],
    primary_word: BitWord,
    secondary_words: &[BitWord],
    partition: &[PartitionEntry],
    ris: &RisConfig,
    cfg: &SchemeConfig,
    snr: Snr,
    rng: &mut R,
) -> Result<SymbolOutcome> {
    validate_partition(partition, secondary_words, extra_secondary_cascades, ris)?;
    let n = ris.total_elements();
    let amp = libm::sqrt(TX_POWER);
    let noise_var = snr.noise_power();
    let cons_p = &cfg.primary_modulation;
    let mapping = cfg.secondary_modulation.mapping();
    let x_s = modulate(&primary_word, cons_p)?;
    let primary_angle = x_s.arg();

    // Per-user sub-codebooks, selected indices, and active element ranges.
    let mut sub_codebooks = Vec::with_capacity(partition.len());
    let mut active_ranges = Vec::with_capacity(partition.len());
    let mut target_phases = Vec::with_capacity(partition.len());
    for (entry, word) in partition.iter().zip(secondary_words) {
        let cons = make_psk_with_mapping(1u32 << entry.bit_width, mapping)?;
        let m = cons.index_of(word)? as usize;
        let group_size = entry.pool.len() >> entry.bit_width;
        let start = entry.pool.start + m * group_size;
        target_phases.push(cons.phase(m as u32));
        active_ranges.push(start..start + group_size);
        sub_codebooks.push(cons);
    }

    // user_of[i] = Some(u) when element i is active for secondary user u.
    let mut user_of: Vec<Option<usize>> = vec![None; n];
    for (u, range) in active_ranges.iter().enumerate() {
        for i in range.clone() {
            user_of[i] = Some(u);
        }
    }

    // Phase program: active elements steer their owner's angle (absorbing
    // the primary symbol), everything else co-phases the primary user.
    let mut phases = Vec::with_capacity(n);
    let mut active_mask = Vec::with_capacity(n);
    let own_cascades = |u: usize| -> &[Complex64] {
        if u == 0 {
            &realization.cascade_w
        } else {
            &extra_secondary_cascades[u - 1]
        }
    };
    for i in 0..n {
        match user_of[i] {
            Some(u) => {
                phases.push(wrap_phase(
                    target_phases[u] - own_cascades(u)[i].arg() - primary_angle,
                ));
                active_mask.push(true);
            }
            None => {
                phases.push(wrap_phase(-realization.cascade_s[i].arg()));
                active_mask.push(false);
            }
        }
    }
    let profile = RisPhaseProfile {
        phases,
        active_mask,
    };

    // Secondary receivers: own active phasor at full strength, leakage on
    // the rest, each detecting over its own sub-codebook.
    let mut sent_secondary = Vec::with_capacity(partition.len());
    let mut decoded_secondary = Vec::with_capacity(partition.len());
    let mut received_secondary = Vec::with_capacity(partition.len());
    for (u, word) in secondary_words.iter().enumerate() {
        let cascades = own_cascades(u);
        let mut own = Complex64::new(0.0, 0.0);
        let mut rest = Complex64::new(0.0, 0.0);
        for (i, c) in cascades.iter().enumerate() {
            let term = c * Complex64::from_polar(1.0, profile.phases[i]);
            if user_of[i] == Some(u) {
                own += term;
            } else {
                rest += term;
            }
        }
        let mut y = amp * x_s * (own + ris.leakage() * rest);
        if cfg.direct_link_enabled {
            y += amp * x_s * realization.direct_w;
        }
        let y = ReceivedSample::new(y + awgn_sample(rng, noise_var), noise_var);
        let known_amp: f64 = active_ranges[u].clone().map(|i| cascades[i].norm()).sum();
        decoded_secondary.push(ml_detect(
            &y,
            Complex64::new(amp * known_amp, 0.0),
            &sub_codebooks[u],
        ));
        sent_secondary.push(*word);
        received_secondary.push(y);
    }

    // Primary receiver, as in the single-user chain: remove the known
    // offset of every active group, then coherent ML over the assist sum.
    let (active_p, assist_p) = reflected_sums(&realization.cascade_s, &profile);
    let mut effective_p = amp * assist_p;
    if cfg.direct_link_enabled {
        effective_p += amp * realization.direct_s;
    }
    let y_p_signal = amp * x_s * (active_p + assist_p)
        + if cfg.direct_link_enabled {
            amp * x_s * realization.direct_s
        } else {
            Complex64::new(0.0, 0.0)
        };
    let y_p = ReceivedSample::new(y_p_signal + awgn_sample(rng, noise_var), noise_var);
    let offset: Complex64 = (0..n)
        .filter_map(|i| {
            user_of[i].map(|u| {
                realization.cascade_s[i]
                    * Complex64::from_polar(1.0, target_phases[u] - own_cascades(u)[i].arg())
            })
        })
        .sum();
    let corrected = ReceivedSample::new(y_p.value - amp * offset, noise_var);
    let decoded_primary = ml_detect(&corrected, effective_p, cons_p);

    Ok(SymbolOutcome {
        sent_primary: primary_word,
        decoded_primary,
        received_primary: y_p,
        sent_secondary,
        decoded_secondary,
        received_secondary,
    })
}

fn validate_partition(
    partition: &[PartitionEntry],
    words: &[BitWord],
    extra_cascades: &[Vec<Complex64>],
    ris: &RisConfig,
) -> Result<()> {
    if partition.is_empty() || words.len() != partition.len() {
        return Err(Error::InvalidPools);
    }
    if extra_cascades.len() != partition.len() - 1
        || extra_cascades
            .iter()
            .any(|c| c.len() != ris.total_elements())
    {
        return Err(Error::InvalidPools);
    }
    let capacity = ris.groups().trailing_zeros() as u8;
    let total: u8 = partition.iter().map(|e| e.bit_width).sum();
    if total != capacity {
        return Err(Error::InvalidPartition {
            expected_bits: capacity,
            got_bits: total,
        });
    }
    for (entry, word) in partition.iter().zip(words) {
        if word.width() != entry.bit_width {
            return Err(Error::WidthMismatch {
                expected: entry.bit_width,
                got: word.width(),
            });
        }
        if entry.bit_width == 0
            || entry.pool.start >= entry.pool.end
            || entry.pool.end > ris.total_elements()
            || entry.pool.len() % (1usize << entry.bit_width) != 0
        {
            return Err(Error::InvalidPools);
        }
    }
    let mut sorted: Vec<&Range<usize>> = partition.iter().map(|e| &e.pool).collect();
    sorted.sort_by_key(|r| r.start);
    for pair in sorted.windows(2) {
        if pair[0].end > pair[1].start {
            return Err(Error::InvalidPools);
        }
    }
    Ok(())
}

/// Weak-user SINR rows of the scheme comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SinrScheme {
    Noma,
    Sdma,
    Rsma,
    Rima,
}

impl SinrScheme {
    pub fn as_str(&self) -> &'static str {
        match self {
            SinrScheme::Noma => "noma",
            SinrScheme::Sdma => "sdma",
            SinrScheme::Rsma => "rsma",
            SinrScheme::Rima => "rima",
        }
    }
}

/// Weak-user SINR from an already-computed effective channel power.
///
/// NOMA: `mu P_t g / ((1-mu) P_t g + P_n)`. RIMA: `P_t g / P_n` (no split,
/// no interference). The SDMA and RSMA rows need precoding vectors that are
/// not modeled here and are rejected.
pub fn weak_sinr_from_power(
    scheme: SinrScheme,
    g_w_sq: f64,
    mu: f64,
    noise_power: f64,
) -> Result<f64> {
    match scheme {
        SinrScheme::Noma => Ok(mu * TX_POWER * g_w_sq
            / ((1.0 - mu) * TX_POWER * g_w_sq + noise_power)),
        SinrScheme::Rima => Ok(TX_POWER * g_w_sq / noise_power),
        SinrScheme::Sdma => Err(Error::UnsupportedScheme { scheme: "sdma" }),
        SinrScheme::Rsma => Err(Error::UnsupportedScheme { scheme: "rsma" }),
    }
}

/// Weak-user SINR of a realization.
///
/// The effective channel power is the scalar direct power for NOMA and the
/// squared coherent sum of the first indexing group's cascade magnitudes
/// for RIMA (the group choice only relabels exchangeable draws).
pub fn compute_sinr(
    scheme: SinrScheme,
    realization: &ChannelRealization,
    ris: &RisConfig,
    mu: f64,
    snr: Snr,
) -> Result<f64> {
    let g_w_sq = match scheme {
        SinrScheme::Noma => realization.direct_w.norm_sqr(),
        SinrScheme::Rima => {
            let amp: f64 = ris
                .group_range(0)
                .map(|i| realization.cascade_w[i].norm())
                .sum();
            amp * amp
        }
        _ => 0.0,
    };
    weak_sinr_from_power(scheme, g_w_sq, mu, snr.noise_power())
}
