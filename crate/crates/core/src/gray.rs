//! Binary-reflected Gray code arithmetic.
//!
//! Words are indexed from 1: `gray_word(1, k)` is all zeros and
//! `gray_word(j + 1, k)` flips position `ruler_capped(j, k)` of `gray_word(j, k)`.
//! Position 1 is the leftmost bit of a word and the one that changes fastest.

use crate::bits::BitWord;
use crate::error::{check_range, Error, Result};

/// Largest supported Gray dimension; `2^k` must fit in a `u64` index.
pub const MAX_GRAY_BITS: u32 = 63;

/// Dimension of a reflected Gray code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrayParams {
    k: u32,
}

impl GrayParams {
    pub fn new(k: u32) -> Result<Self> {
        check_range("gray dimension k", k as u64, 1, MAX_GRAY_BITS as u64)?;
        Ok(Self { k })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Number of words, `2^k`.
    pub fn count(&self) -> u64 {
        1u64 << self.k
    }
}

/// The ruler sequence: largest `r` with `2^r | 2j`, i.e. one plus the number
/// of trailing zeros of `j`.
///
/// Panics if `j == 0`.
#[inline]
pub fn ruler(j: u64) -> u32 {
    assert!(j >= 1, "ruler sequence is indexed from 1");
    j.trailing_zeros() + 1
}

/// `min(ruler(j), k)`.
#[inline]
pub fn ruler_capped(j: u64, k: u32) -> u32 {
    ruler(j).min(k)
}

/// Gray word `j` packed LSB-first: bit `i` holds position `i + 1`.
#[inline]
pub fn gray_bits(j: u64) -> u64 {
    let b = j - 1;
    b ^ (b >> 1)
}

/// Inverse of [`gray_bits`] for a `k`-bit word.
#[inline]
pub fn gray_rank(g: u64, k: u32) -> u64 {
    // suffix XOR: b_i = g_i ^ g_{i+1} ^ ... ^ g_k
    let mut b = g;
    let mut shift = 1;
    while shift < k {
        b ^= b >> shift;
        shift <<= 1;
    }
    b + 1
}

/// The `j`th word of the `k`-bit reflected Gray code.
pub fn gray_word(j: u64, k: u32) -> Result<BitWord> {
    let params = GrayParams::new(k)?;
    check_range("gray index j", j, 1, params.count())?;
    Ok(BitWord::from_u64_lsb(gray_bits(j), k as usize))
}

/// The index `j` with `gray_word(j, g.len()) == g`.
pub fn gray_index(g: &BitWord) -> Result<u64> {
    let k =
        u32::try_from(g.len()).map_err(|_| Error::InvalidParameter("gray word too long".into()))?;
    GrayParams::new(k)?;
    Ok(gray_rank(g.to_u64_lsb(), k))
}
