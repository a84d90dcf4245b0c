//! Scheme and surface configuration types.

use crate::error::Error;
use crate::psk::PskConstellation;
use crate::Result;

/// Transmit power; the sweep axis is transmit SNR, so power is normalized.
pub const TX_POWER: f64 = 1.0;

/// Average transmit SNR, `P_t / P_n`, stored in dB.
///
/// `f64::INFINITY` is the noise-free sentinel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Snr {
    db: f64,
}

impl Snr {
    pub fn from_db(db: f64) -> Self {
        Self { db }
    }

    pub fn db(&self) -> f64 {
        self.db
    }

    pub fn linear(&self) -> f64 {
        libm::pow(10.0, self.db / 10.0)
    }

    /// Total complex noise power `P_n` under the normalized transmit power.
    pub fn noise_power(&self) -> f64 {
        if self.db.is_infinite() && self.db > 0.0 {
            0.0
        } else {
            TX_POWER / self.linear()
        }
    }
}

/// Reflecting-surface budget and its indexing split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RisConfig {
    total_elements: usize,
    groups: usize,
    leakage: f64,
}

impl RisConfig {
    /// Validates that `groups` divides `total_elements` and leakage is in [0, 1].
    pub fn new(total_elements: usize, groups: usize, leakage: f64) -> Result<Self> {
        if total_elements == 0 || groups == 0 || total_elements % groups != 0 {
            return Err(Error::IndivisibleElements {
                total_elements,
                groups,
            });
        }
        if !(0.0..=1.0).contains(&leakage) {
            return Err(Error::InvalidLeakage { leakage });
        }
        Ok(Self {
            total_elements,
            groups,
            leakage,
        })
    }

    /// Element budget `N_E`.
    pub fn total_elements(&self) -> usize {
        self.total_elements
    }

    /// Number of indexing groups `N_G`.
    pub fn groups(&self) -> usize {
        self.groups
    }

    /// Elements per indexing group, `N_R = N_E / N_G`.
    pub fn indexing_size(&self) -> usize {
        self.total_elements / self.groups
    }

    /// Fraction of assisting-element amplitude that reaches a nulled user.
    pub fn leakage(&self) -> f64 {
        self.leakage
    }

    /// Element index range of indexing group `m`.
    pub fn group_range(&self, m: usize) -> core::ops::Range<usize> {
        debug_assert!(m < self.groups);
        let n_r = self.indexing_size();
        m * n_r..(m + 1) * n_r
    }
}

/// Which transceiver chain a scheme entry runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    /// Secondary bits ride in the surface phase configuration; no power split.
    Rima,
    /// Power-domain superposition over the direct links.
    Noma,
    /// Power-domain superposition with the surface co-phased to the weak user.
    RisNoma,
}

impl SchemeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SchemeKind::Rima => "rima",
            SchemeKind::Noma => "noma",
            SchemeKind::RisNoma => "ris_noma",
        }
    }

    /// Whether the scheme superimposes two power-split signals.
    pub fn is_noma_family(&self) -> bool {
        matches!(self, SchemeKind::Noma | SchemeKind::RisNoma)
    }
}

/// Full per-scheme configuration for one transceiver chain.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeConfig {
    pub scheme: SchemeKind,
    /// Fraction of transmit power assigned to the weak user (NOMA family).
    pub power_split: f64,
    pub primary_modulation: PskConstellation,
    pub secondary_modulation: PskConstellation,
    /// Adds the direct base-station path on top of the surface path.
    pub direct_link_enabled: bool,
}

impl SchemeConfig {
    /// Checks the power-split convention: the NOMA family must hand the
    /// larger share to the weak user.
    pub fn validate(&self) -> Result<()> {
        if self.scheme.is_noma_family() && !(self.power_split > 0.5 && self.power_split < 1.0) {
            return Err(Error::InvalidPowerSplit {
                mu: self.power_split,
            });
        }
        Ok(())
    }
}
