//! Uniform PSK constellations with configurable bit-to-phase labeling.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::bits::BitWord;
use crate::error::Error;
use crate::Result;

/// Bit-to-phase labeling convention.
///
/// Gray labeling is the default: adjacent phases differ in one bit, so a
/// nearest-neighbor symbol error costs one bit. The natural-binary map
/// (label m on phase index m) is kept as a switch because some decoding
/// tables are written that way; the active convention is reported in run
/// metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitMapping {
    Gray,
    Natural,
}

impl BitMapping {
    pub fn as_str(&self) -> &'static str {
        match self {
            BitMapping::Gray => "gray",
            BitMapping::Natural => "natural",
        }
    }
}

/// An ordered phase codebook of order `M = 2^b` with one bit label per phase.
///
/// Phases are `2*pi*m / M` for `m = 0..M-1`, strictly increasing in
/// `[0, 2*pi)`. The label of phase 0 is always the all-zeros word.
#[derive(Debug, Clone, PartialEq)]
pub struct PskConstellation {
    order: u32,
    bits: u8,
    mapping: BitMapping,
    phases: Vec<f64>,
    points: Vec<Complex64>,
    labels: Vec<BitWord>,
    /// Phase index for each label value; inverse of `labels`.
    index_of_label: Vec<u32>,
}

/// `e^{j phase}` with components on the axes snapped exactly, so BPSK is
/// exactly `{1, -1}` and QPSK exactly `{1, j, -1, -j}`.
fn unit_phasor(phase: f64) -> Complex64 {
    let mut p = Complex64::from_polar(1.0, phase);
    if libm::fabs(p.re) < 1e-12 {
        p.re = 0.0;
    }
    if libm::fabs(p.im) < 1e-12 {
        p.im = 0.0;
    }
    p
}

/// Builds the default Gray-labeled PSK constellation of the given order.
pub fn make_psk(order: u32) -> Result<PskConstellation> {
    make_psk_with_mapping(order, BitMapping::Gray)
}

/// Builds a PSK constellation with an explicit labeling convention.
pub fn make_psk_with_mapping(order: u32, mapping: BitMapping) -> Result<PskConstellation> {
    if order < 2 || !order.is_power_of_two() {
        return Err(Error::InvalidOrder { order });
    }
    let bits = order.trailing_zeros() as u8;
    let mut phases = Vec::with_capacity(order as usize);
    let mut points = Vec::with_capacity(order as usize);
    let mut labels = Vec::with_capacity(order as usize);
    let mut index_of_label = alloc::vec![0u32; order as usize];
    for m in 0..order {
        let phase = TAU * m as f64 / order as f64;
        phases.push(phase);
        points.push(unit_phasor(phase));
        let label_value = match mapping {
            BitMapping::Gray => m ^ (m >> 1),
            BitMapping::Natural => m,
        };
        let label = BitWord::new(label_value, bits)?;
        labels.push(label);
        index_of_label[label_value as usize] = m;
    }
    Ok(PskConstellation {
        order,
        bits,
        mapping,
        phases,
        points,
        labels,
        index_of_label,
    })
}

impl PskConstellation {
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Bits carried per symbol, `log2(order)`.
    pub fn bits(&self) -> u8 {
        self.bits
    }

    pub fn mapping(&self) -> BitMapping {
        self.mapping
    }

    /// Phase of constellation point `m`, in `[0, 2*pi)`.
    pub fn phase(&self, m: u32) -> f64 {
        self.phases[m as usize]
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// Unit-modulus constellation point `e^{j phase(m)}`.
    pub fn point(&self, m: u32) -> Complex64 {
        self.points[m as usize]
    }

    /// Bit label of constellation point `m`.
    pub fn label(&self, m: u32) -> BitWord {
        self.labels[m as usize]
    }

    /// Phase index selected by a bit word.
    pub fn index_of(&self, word: &BitWord) -> Result<u32> {
        if word.width() != self.bits {
            return Err(Error::WidthMismatch {
                expected: self.bits,
                got: word.width(),
            });
        }
        Ok(self.index_of_label[word.value() as usize])
    }
}
