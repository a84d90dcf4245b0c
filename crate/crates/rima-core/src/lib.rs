//! Link-level simulation core for RIS-indexed multiple access.
//!
//! The crate models a downlink cell in which a base station serves two users
//! over one time-frequency resource, either by power-domain superposition
//! (NOMA, with or without a reconfigurable intelligent surface) or by
//! embedding the second user's bits in the phase configuration of the
//! surface itself (RIMA). Everything here is single-symbol, complex-baseband
//! and deterministic given an [`RngStream`](channel::RngStream), so Monte
//! Carlo sweeps parallelize without changing their output.
//!
//! The crate is `no_std` (with `alloc`); IO, configuration files and the
//! command line live in the companion `rima-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bits;
pub mod channel;
pub mod codebook;
pub mod config;
pub mod error;
pub mod harness;
pub mod modem;
pub mod oracle;
pub mod psk;
pub mod schemes;

pub use bits::BitWord;
pub use channel::{ChannelRealization, RngStream};
pub use config::{RisConfig, SchemeConfig, SchemeKind, Snr, TX_POWER};
pub use error::Error;
pub use psk::{BitMapping, PskConstellation};

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
