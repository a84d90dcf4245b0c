//! Error type shared across the simulation core.

use core::fmt;

/// Domain and configuration errors raised by the core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Binomial arguments outside 1 <= k <= n.
    InvalidCombination { n: u64, k: u64 },
    /// Constellation order is not a power of two >= 2.
    InvalidOrder { order: u32 },
    /// Bit word width does not match what the operation expects.
    WidthMismatch { expected: u8, got: u8 },
    /// Group count does not divide the element budget.
    IndivisibleElements { total_elements: usize, groups: usize },
    /// Power split outside the valid range for the scheme.
    InvalidPowerSplit { mu: f64 },
    /// Leakage fraction outside [0, 1].
    InvalidLeakage { leakage: f64 },
    /// Requested a SINR row whose transceiver is not modeled.
    UnsupportedScheme { scheme: &'static str },
    /// A draw of zero samples was requested.
    EmptyDraw,
    /// Sweep configured with no schemes.
    EmptySchemes,
    /// SNR grid is empty or not strictly increasing.
    InvalidSnrGrid,
    /// Sweep configured with zero trials per point.
    ZeroTrials,
    /// Secondary element pools overlap or fall outside the surface.
    InvalidPools,
    /// Multi-user bit widths do not add up to the indexing capacity.
    InvalidPartition { expected_bits: u8, got_bits: u8 },
    /// Confidence level outside (0, 1) or errors > trials.
    InvalidInterval,
    /// Schemes in one sweep disagree on the shared surface size.
    MismatchedSurfaces,
    /// A RIS-backed scheme is missing its surface configuration.
    MissingRisConfig,
    /// Indexing group count does not match the secondary constellation order.
    GroupOrderMismatch { groups: usize, order: u32 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidCombination { n, k } => {
                write!(f, "invalid combination C({n}, {k}): requires 1 <= k <= n")
            }
            Error::InvalidOrder { order } => {
                write!(f, "constellation order {order} is not a power of two >= 2")
            }
            Error::WidthMismatch { expected, got } => {
                write!(f, "bit word width {got} does not match expected {expected}")
            }
            Error::IndivisibleElements {
                total_elements,
                groups,
            } => write!(
                f,
                "group count {groups} does not divide element budget {total_elements}"
            ),
            Error::InvalidPowerSplit { mu } => {
                write!(f, "power split {mu} outside valid range")
            }
            Error::InvalidLeakage { leakage } => {
                write!(f, "leakage {leakage} outside [0, 1]")
            }
            Error::UnsupportedScheme { scheme } => {
                write!(f, "unsupported scheme {scheme}: precoder design not modeled")
            }
            Error::EmptyDraw => write!(f, "requested an empty draw"),
            Error::EmptySchemes => write!(f, "sweep has no schemes"),
            Error::InvalidSnrGrid => write!(f, "SNR grid must be non-empty and strictly increasing"),
            Error::ZeroTrials => write!(f, "trials per point must be >= 1"),
            Error::InvalidPools => write!(f, "secondary element pools overlap or are out of range"),
            Error::InvalidPartition {
                expected_bits,
                got_bits,
            } => write!(
                f,
                "partition widths sum to {got_bits} bits, surface mode carries {expected_bits}"
            ),
            Error::InvalidInterval => write!(f, "invalid confidence interval request"),
            Error::MismatchedSurfaces => {
                write!(f, "schemes sharing one sweep must agree on the surface size")
            }
            Error::MissingRisConfig => {
                write!(f, "RIS-backed scheme entry has no surface configuration")
            }
            Error::GroupOrderMismatch { groups, order } => write!(
                f,
                "indexing group count {groups} must equal the secondary constellation order {order}"
            ),
        }
    }
}

impl core::error::Error for Error {}
