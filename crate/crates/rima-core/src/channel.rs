//! Seeded generation of per-trial channel coefficients and user ordering.
//!
//! Every random quantity in a trial flows from one [`RngStream`], a
//! counter-mode generator keyed by `(seed, stream_id)`. Trials are therefore
//! independent of execution order and worker count: stream `t` always yields
//! the same draws, no matter which thread runs it.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::config::RisConfig;
use crate::error::Error;
use crate::Result;

/// One independent, reproducible draw sequence.
///
/// Identical `(seed, stream_id)` pairs yield identical sequences regardless
/// of how many other streams are consumed concurrently.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// Instantiates the generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// One circularly-symmetric complex Gaussian draw with `E[|h|^2] = 1`.
#[inline]
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    const SCALE: f64 = core::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * SCALE, im * SCALE)
}

/// Draws `n` i.i.d. unit-variance complex Gaussian coefficients
/// (Rayleigh-distributed envelopes).
pub fn sample_rayleigh<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<Vec<Complex64>> {
    if n == 0 {
        return Err(Error::EmptyDraw);
    }
    Ok((0..n).map(|_| complex_gaussian(rng)).collect())
}

/// One complex AWGN sample of total power `noise_power` (`P_n/2` per
/// real dimension). `noise_power = 0` returns exactly zero but still
/// consumes the underlying draws, keeping streams aligned across SNR points.
#[inline]
pub fn awgn_sample<R: Rng + ?Sized>(rng: &mut R, noise_power: f64) -> Complex64 {
    let g = complex_gaussian(rng);
    if noise_power == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        g * libm::sqrt(noise_power)
    }
}

/// Per-trial channel coefficients for the two users.
///
/// The `_s` slot holds the first user and `_w` the second as drawn;
/// [`order_users`] decides which slot actually plays the strong role and
/// [`ChannelRealization::oriented`] rearranges the slots accordingly.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// Direct base-station link of the first (nominally strong) user.
    pub direct_s: Complex64,
    /// Direct base-station link of the second (nominally weak) user.
    pub direct_w: Complex64,
    /// Per-element cascaded coefficients toward the first user.
    pub cascade_s: Vec<Complex64>,
    /// Per-element cascaded coefficients toward the second user.
    pub cascade_w: Vec<Complex64>,
}

/// Which drawn slot serves which role.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoleAssignment {
    /// Slot index (0 = `_s`, 1 = `_w`) of the primary (strong) user.
    pub primary: usize,
    /// Slot index of the secondary (weak) user.
    pub secondary: usize,
}

/// Draws one per-element cascaded vector: each entry is the product of two
/// independent unit-variance complex Gaussians (base-station to element,
/// element to user).
pub fn draw_cascades<R: Rng + ?Sized>(rng: &mut R, n_elements: usize) -> Vec<Complex64> {
    (0..n_elements)
        .map(|_| {
            let to_element = complex_gaussian(rng);
            let to_user = complex_gaussian(rng);
            to_element * to_user
        })
        .collect()
}

/// Draws all coefficients of one trial in a fixed order: direct links first
/// (skipped and zeroed when disabled), then the first user's cascades, then
/// the second user's.
pub fn draw_realization<R: Rng + ?Sized>(
    rng: &mut R,
    ris: &RisConfig,
    direct_link_enabled: bool,
) -> ChannelRealization {
    let zero = Complex64::new(0.0, 0.0);
    let (direct_s, direct_w) = if direct_link_enabled {
        (complex_gaussian(rng), complex_gaussian(rng))
    } else {
        (zero, zero)
    };
    let n = ris.total_elements();
    ChannelRealization {
        direct_s,
        direct_w,
        cascade_s: draw_cascades(rng, n),
        cascade_w: draw_cascades(rng, n),
    }
}

impl ChannelRealization {
    /// Channel-strength metric of one slot: direct power when direct links
    /// are present, otherwise total cascaded power.
    fn strength(&self, slot: usize) -> f64 {
        let direct_present = self.direct_s.norm_sqr() > 0.0 || self.direct_w.norm_sqr() > 0.0;
        if direct_present {
            match slot {
                0 => self.direct_s.norm_sqr(),
                _ => self.direct_w.norm_sqr(),
            }
        } else {
            let cascade = match slot {
                0 => &self.cascade_s,
                _ => &self.cascade_w,
            };
            cascade.iter().map(|c| c.norm_sqr()).sum()
        }
    }

    /// Rearranges the slots so `_s` holds the primary user per [`order_users`].
    pub fn oriented(mut self) -> Self {
        let roles = order_users(&self);
        if roles.primary == 1 {
            core::mem::swap(&mut self.direct_s, &mut self.direct_w);
            core::mem::swap(&mut self.cascade_s, &mut self.cascade_w);
        }
        self
    }
}

/// Assigns roles: the slot with the larger channel-strength metric is
/// primary, ties break toward the first slot.
pub fn order_users(realization: &ChannelRealization) -> RoleAssignment {
    if realization.strength(1) > realization.strength(0) {
        RoleAssignment {
            primary: 1,
            secondary: 0,
        }
    } else {
        RoleAssignment {
            primary: 0,
            secondary: 1,
        }
    }
}
