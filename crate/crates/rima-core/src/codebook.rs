//! Index-modulation codebook sizing.

use num_bigint::BigUint;
use num_integer::binomial;

use crate::error::Error;
use crate::Result;

/// Bits carried by activating `k` of `n` entities: `floor(log2(C(n, k)))`.
///
/// The binomial is evaluated in exact integer arithmetic so the floor is
/// never corrupted by a float log landing just under a power of two.
pub fn im_codebook_bits(n: u64, k: u64) -> Result<u64> {
    if k < 1 || k > n {
        return Err(Error::InvalidCombination { n, k });
    }
    let count = binomial(BigUint::from(n), BigUint::from(k));
    // bits() is floor(log2(x)) + 1 for x > 0.
    Ok(count.bits() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exact binomial by Pascal's rule, independent of the multiply route.
    fn pascal(n: u64, k: u64) -> BigUint {
        let mut row = alloc::vec![BigUint::from(1u32)];
        for _ in 0..n {
            let mut next = alloc::vec![BigUint::from(1u32)];
            for i in 1..row.len() {
                next.push(&row[i - 1] + &row[i]);
            }
            next.push(BigUint::from(1u32));
            row = next;
        }
        row[k as usize].clone()
    }

    #[test]
    fn small_values() {
        assert_eq!(im_codebook_bits(4, 2).unwrap(), 2); // C(4,2) = 6
        assert_eq!(im_codebook_bits(8, 1).unwrap(), 3); // C(8,1) = 8
        assert_eq!(im_codebook_bits(1, 1).unwrap(), 0); // C(1,1) = 1
    }

    #[test]
    fn large_value_matches_big_integer_oracle() {
        let c = pascal(20, 10);
        assert_eq!(c, BigUint::from(184_756u32));
        assert_eq!(im_codebook_bits(20, 10).unwrap(), 17);
    }

    #[test]
    fn rejects_out_of_range() {
        assert_eq!(
            im_codebook_bits(4, 5).unwrap_err(),
            Error::InvalidCombination { n: 4, k: 5 }
        );
        assert_eq!(
            im_codebook_bits(4, 0).unwrap_err(),
            Error::InvalidCombination { n: 4, k: 0 }
        );
    }

    #[test]
    fn bracketing_invariant() {
        // 2^bits <= C(n, k) < 2^(bits + 1), checked against the Pascal oracle.
        for n in 1..=40u64 {
            for k in 1..=n {
                let bits = im_codebook_bits(n, k).unwrap();
                let c = pascal(n, k);
                assert!(BigUint::from(1u32) << bits <= c, "C({n},{k})");
                assert!(c < BigUint::from(1u32) << (bits + 1), "C({n},{k})");
            }
        }
    }

    #[test]
    fn exact_powers_of_two_not_rounded_up() {
        // C(n, 1) = n: at exact powers of two the floor must not drop.
        assert_eq!(im_codebook_bits(1024, 1).unwrap(), 10);
        assert_eq!(im_codebook_bits(1023, 1).unwrap(), 9);
        assert_eq!(im_codebook_bits(1025, 1).unwrap(), 10);
    }
}
