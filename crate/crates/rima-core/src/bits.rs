//! Fixed-width bit words, most-significant bit first.

use core::fmt;

use rand::Rng;

use crate::error::Error;
use crate::Result;

/// An ordered bit sequence of known width (MSB first), backed by a `u32`.
///
/// Width is limited to 32 bits, far beyond any constellation used here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitWord {
    value: u32,
    width: u8,
}

impl BitWord {
    /// Builds a word from an integer value and a width.
    ///
    /// Fails if the value does not fit in `width` bits or `width` is 0 or
    /// larger than 32.
    pub fn new(value: u32, width: u8) -> Result<Self> {
        if width == 0 || width > 32 {
            return Err(Error::WidthMismatch {
                expected: 32,
                got: width,
            });
        }
        if width < 32 && value >> width != 0 {
            return Err(Error::WidthMismatch {
                expected: width,
                got: 32 - value.leading_zeros() as u8,
            });
        }
        Ok(Self { value, width })
    }

    /// The all-zeros word of the given width.
    pub fn zero(width: u8) -> Self {
        Self::new(0, width).expect("zero fits any width")
    }

    /// Draws a uniformly random word of the given width.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, width: u8) -> Self {
        let raw = rng.next_u32();
        let value = if width >= 32 { raw } else { raw & ((1 << width) - 1) };
        Self { value, width }
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn width(&self) -> u8 {
        self.width
    }

    /// Bit at position `i`, counted from the most significant bit.
    pub fn bit(&self, i: u8) -> u8 {
        debug_assert!(i < self.width);
        ((self.value >> (self.width - 1 - i)) & 1) as u8
    }

    /// Keeps the first `width` bits (MSB side), dropping the rest.
    pub fn prefix(&self, width: u8) -> Self {
        debug_assert!(width >= 1 && width <= self.width);
        Self {
            value: self.value >> (self.width - width),
            width,
        }
    }

    /// Number of differing bits between two words of equal width.
    pub fn hamming_distance(&self, other: &Self) -> u32 {
        debug_assert_eq!(self.width, other.width);
        (self.value ^ other.value).count_ones()
    }

    /// Concatenates `self` (high bits) with `other` (low bits).
    pub fn concat(&self, other: &Self) -> Result<Self> {
        Self::new((self.value << other.width) | other.value, self.width + other.width)
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.width {
            write!(f, "{}", self.bit(i))?;
        }
        Ok(())
    }
}
