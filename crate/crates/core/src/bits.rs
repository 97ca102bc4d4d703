//! Fixed-length packed binary words.
//!
//! Bit `i` (0-based) of a [`BitWord`] is the `(i + 1)`th symbol of the word
//! when written left to right. Storage is little-endian within `u64` limbs;
//! the on-disk byte packing is MSB-first and handled by [`BitWord::to_bytes`].

use std::fmt;
use std::ops::BitXorAssign;

const LIMB: usize = 64;

/// A binary vector of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitWord {
    limbs: Vec<u64>,
    len: usize,
}

#[inline]
fn limbs_for(len: usize) -> usize {
    len.div_ceil(LIMB)
}

impl BitWord {
    /// All-zero word of length `len`.
    pub fn zeros(len: usize) -> Self {
        Self {
            limbs: vec![0; limbs_for(len)],
            len,
        }
    }

    /// All-one word of length `len`.
    pub fn ones(len: usize) -> Self {
        let mut w = Self {
            limbs: vec![u64::MAX; limbs_for(len)],
            len,
        };
        w.clear_tail();
        w
    }

    /// Constant word: all ones if `bit`, else all zeros.
    pub fn filled(len: usize, bit: bool) -> Self {
        if bit {
            Self::ones(len)
        } else {
            Self::zeros(len)
        }
    }

    /// Builds a word from a bool slice, left to right.
    pub fn from_bools(bits: &[bool]) -> Self {
        let mut w = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                w.set(i, true);
            }
        }
        w
    }

    /// Parses a string of `0`/`1` characters. Whitespace and `_` are ignored.
    pub fn parse(s: &str) -> Option<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c if c.is_whitespace() || c == '_' => {}
                _ => return None,
            }
        }
        Some(Self::from_bools(&bits))
    }

    /// The low `len` bits of `value`, bit 0 of `value` landing at position 0.
    pub fn from_u64_lsb(value: u64, len: usize) -> Self {
        assert!(len <= LIMB, "from_u64_lsb supports at most 64 bits");
        let mut w = Self::zeros(len);
        if len > 0 {
            w.limbs[0] = value;
            w.clear_tail();
        }
        w
    }

    /// Inverse of [`BitWord::from_u64_lsb`]; only valid for words of at most 64 bits.
    pub fn to_u64_lsb(&self) -> u64 {
        assert!(self.len <= LIMB, "to_u64_lsb supports at most 64 bits");
        self.limbs.first().copied().unwrap_or(0)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        (self.limbs[i / LIMB] >> (i % LIMB)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        let mask = 1u64 << (i % LIMB);
        if bit {
            self.limbs[i / LIMB] |= mask;
        } else {
            self.limbs[i / LIMB] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        self.limbs[i / LIMB] ^= 1u64 << (i % LIMB);
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    /// Hamming distance. Panics on length mismatch.
    pub fn distance(&self, other: &BitWord) -> usize {
        assert_eq!(
            self.len, other.len,
            "distance between words of different length"
        );
        self.limbs
            .iter()
            .zip(&other.limbs)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Positions where `self` and `other` differ, ascending.
    pub fn diff_positions(&self, other: &BitWord) -> Vec<usize> {
        assert_eq!(
            self.len, other.len,
            "diff between words of different length"
        );
        let mut out = Vec::new();
        for (li, (a, b)) in self.limbs.iter().zip(&other.limbs).enumerate() {
            let mut x = a ^ b;
            while x != 0 {
                out.push(li * LIMB + x.trailing_zeros() as usize);
                x &= x - 1;
            }
        }
        out
    }

    /// Positions holding a one, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.diff_positions(&BitWord::zeros(self.len))
    }

    /// Bitwise complement.
    pub fn complement(&self) -> BitWord {
        let mut w = BitWord {
            limbs: self.limbs.iter().map(|l| !l).collect(),
            len: self.len,
        };
        w.clear_tail();
        w
    }

    /// Copy of bits `[start, start + len)`.
    pub fn slice(&self, start: usize, len: usize) -> BitWord {
        assert!(start + len <= self.len, "slice out of range");
        let mut w = BitWord::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                w.set(i, true);
            }
        }
        w
    }

    /// Overwrites bits `[start, start + src.len())` with `src`.
    pub fn write_at(&mut self, start: usize, src: &BitWord) {
        assert!(start + src.len <= self.len, "write out of range");
        for i in 0..src.len {
            self.set(start + i, src.get(i));
        }
    }

    /// Concatenation of `parts` in order.
    pub fn concat<'a, I>(parts: I) -> BitWord
    where
        I: IntoIterator<Item = &'a BitWord>,
    {
        let mut bits = Vec::new();
        for p in parts {
            bits.extend(p.iter());
        }
        BitWord::from_bools(&bits)
    }

    /// Appends the bits of `other`.
    pub fn extend_from(&mut self, other: &BitWord) {
        let start = self.len;
        self.len += other.len;
        self.limbs.resize(limbs_for(self.len), 0);
        for i in 0..other.len {
            if other.get(i) {
                self.set(start + i, true);
            }
        }
    }

    /// Bits left to right.
    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Packs into `ceil(len / 8)` bytes, MSB first within each byte, zero padded.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len.div_ceil(8)];
        for i in 0..self.len {
            if self.get(i) {
                out[i / 8] |= 0x80 >> (i % 8);
            }
        }
        out
    }

    /// Unpacks the first `len` bits of `bytes` (MSB first). Returns `None` if
    /// `bytes` is too short.
    pub fn from_bytes(bytes: &[u8], len: usize) -> Option<BitWord> {
        if bytes.len() < len.div_ceil(8) {
            return None;
        }
        let mut w = BitWord::zeros(len);
        for i in 0..len {
            if bytes[i / 8] & (0x80 >> (i % 8)) != 0 {
                w.set(i, true);
            }
        }
        Some(w)
    }

    /// Lowercase hex of [`BitWord::to_bytes`].
    pub fn to_hex(&self) -> String {
        self.to_bytes().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(hex: &str, len: usize) -> Option<BitWord> {
        let hex = hex.trim();
        if !hex.len().is_multiple_of(2) {
            return None;
        }
        let bytes = (0..hex.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&hex[i..i + 2], 16).ok())
            .collect::<Option<Vec<u8>>>()?;
        BitWord::from_bytes(&bytes, len)
    }

    fn clear_tail(&mut self) {
        let rem = self.len % LIMB;
        if rem != 0 {
            if let Some(last) = self.limbs.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl BitXorAssign<&BitWord> for BitWord {
    fn bitxor_assign(&mut self, rhs: &BitWord) {
        assert_eq!(self.len, rhs.len, "xor of words of different length");
        for (a, b) in self.limbs.iter_mut().zip(&rhs.limbs) {
            *a ^= b;
        }
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_display() {
        let w = BitWord::parse("1100 0011").unwrap();
        assert_eq!(w.len(), 8);
        assert_eq!(w.to_string(), "11000011");
        assert!(BitWord::parse("10x").is_none());
    }

    #[test]
    fn ones_has_clean_tail() {
        let w = BitWord::ones(70);
        assert_eq!(w.weight(), 70);
        assert_eq!(w.complement(), BitWord::zeros(70));
    }

    #[test]
    fn msb_first_packing() {
        let w = BitWord::parse("1000000001").unwrap();
        assert_eq!(w.to_bytes(), vec![0x80, 0x40]);
        assert_eq!(w.to_hex(), "8040");
    }

    #[test]
    fn slice_write_concat() {
        let a = BitWord::parse("101").unwrap();
        let b = BitWord::parse("0011").unwrap();
        let c = BitWord::concat([&a, &b]);
        assert_eq!(c.to_string(), "1010011");
        assert_eq!(c.slice(3, 4), b);
        let mut z = BitWord::zeros(7);
        z.write_at(3, &b);
        assert_eq!(z.to_string(), "0000011");
    }

    proptest! {
        #[test]
        fn bytes_roundtrip(bits in proptest::collection::vec(any::<bool>(), 0..200)) {
            let w = BitWord::from_bools(&bits);
            prop_assert_eq!(BitWord::from_bytes(&w.to_bytes(), w.len()).unwrap(), w.clone());
            prop_assert_eq!(BitWord::from_hex(&w.to_hex(), w.len()).unwrap(), w);
        }

        #[test]
        fn distance_is_weight_of_xor(
            a in proptest::collection::vec(any::<bool>(), 130),
            b in proptest::collection::vec(any::<bool>(), 130),
        ) {
            let (a, b) = (BitWord::from_bools(&a), BitWord::from_bools(&b));
            let mut x = a.clone();
            x ^= &b;
            prop_assert_eq!(a.distance(&b), x.weight());
            prop_assert_eq!(a.diff_positions(&b).len(), x.weight());
        }
    }
}
