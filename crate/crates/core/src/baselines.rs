//! Earlier robust Gray code constructions that interpolate between whole
//! staircase codewords, for comparison against [`crate::rgc::CodeLayout`].
//!
//! Both reuse the Gray-ordered staircase codewords `c^j`, so consecutive
//! milestones differ in one staircase row per copy.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::bits::BitWord;
use crate::codes::StaircaseCode;
use crate::error::Result;
use crate::gray::{gray_bits, gray_index, ruler_capped};
use crate::rgc::classify_buffer;
use crate::scheme::{
    check_word, checked_size, encode_on_path, window_argmin, MilestonePath, RobustGrayScheme,
    SchemeKind,
};

fn staircase_codeword(code: &StaircaseCode, j: u64) -> BitWord {
    let msg = BitWord::from_u64_lsb(gray_bits(j), code.dim());
    code.encode(&msg)
        .expect("gray word has staircase dimension")
}

fn estimate_j(code: &StaircaseCode, copy: &BitWord) -> u64 {
    let g = code.decode(copy).expect("copy has staircase length");
    gray_index(&g).expect("staircase dimension is a valid gray dimension")
}

/// Four repeated copies of `c^j`; a transition rewrites copy 1, then 2, 3, 4.
#[derive(Clone, Debug)]
pub struct Lp4Code {
    code: Arc<StaircaseCode>,
    size: u64,
}

impl Lp4Code {
    pub const COPIES: usize = 4;

    pub fn new(code: Arc<StaircaseCode>) -> Result<Self> {
        let step = (Self::COPIES * code.inner().len()) as u64;
        let size = checked_size(code.dim(), step)?;
        Ok(Self { code, size })
    }

    fn copy(&self, word: &BitWord, q: usize) -> BitWord {
        let nc = self.code.len();
        word.slice(q * nc, nc)
    }

    /// Milestone estimate: the value decoded from the most copies, the
    /// smallest on ties.
    pub fn estimate_milestone(&self, word: &BitWord) -> Result<u64> {
        check_word(self, word)?;
        let mut votes: BTreeMap<u64, usize> = BTreeMap::new();
        for q in 0..Self::COPIES {
            *votes
                .entry(estimate_j(&self.code, &self.copy(word, q)))
                .or_default() += 1;
        }
        let best = votes.values().copied().max().unwrap_or(0);
        Ok(votes
            .into_iter()
            .find(|&(_, n)| n == best)
            .map(|(j, _)| j)
            .unwrap_or(1))
    }
}

impl MilestonePath for Lp4Code {
    fn path_len(&self) -> usize {
        Self::COPIES * self.code.len()
    }

    fn milestones(&self) -> u64 {
        1u64 << self.code.dim()
    }

    fn path_step(&self) -> u64 {
        (Self::COPIES * self.code.inner().len()) as u64
    }

    fn milestone_word(&self, j: u64) -> BitWord {
        let c = staircase_codeword(&self.code, j);
        BitWord::concat([&c, &c, &c, &c])
    }

    fn flips(&self, j: u64) -> Vec<usize> {
        let rho = ruler_capped(j, self.code.dim() as u32) as usize;
        let support = self.code.row_support(rho);
        let nc = self.code.len();
        (0..Self::COPIES)
            .flat_map(|q| support.iter().map(move |&p| q * nc + p))
            .collect()
    }
}

impl RobustGrayScheme for Lp4Code {
    fn kind(&self) -> SchemeKind {
        SchemeKind::Lp4
    }

    fn word_len(&self) -> usize {
        self.path_len()
    }

    fn size(&self) -> u64 {
        self.size
    }

    fn step(&self) -> u64 {
        self.path_step()
    }

    fn encode(&self, x: u64) -> Result<BitWord> {
        encode_on_path(self, x)
    }

    fn decode(&self, word: &BitWord) -> Result<u64> {
        let j_hat = self.estimate_milestone(word)?;
        Ok(window_argmin(self, word, j_hat))
    }
}

/// `buf | c^j | buf | c^j | buf` with constant buffers of the parity of `j`.
/// A transition rewrites buffer 1, copy 1, buffer 2, copy 2, buffer 3.
#[derive(Clone, Debug)]
pub struct FwCode {
    code: Arc<StaircaseCode>,
    buf_len: usize,
    size: u64,
}

impl FwCode {
    pub fn new(code: Arc<StaircaseCode>) -> Result<Self> {
        let buf_len = code.inner().len();
        let step = (3 * buf_len + 2 * code.inner().len()) as u64;
        let size = checked_size(code.dim(), step)?;
        Ok(Self {
            code,
            buf_len,
            size,
        })
    }

    pub fn buf_len(&self) -> usize {
        self.buf_len
    }

    fn offsets(&self) -> [usize; 5] {
        let (b, nc) = (self.buf_len, self.code.len());
        [0, b, b + nc, 2 * b + nc, 2 * b + 2 * nc]
    }

    /// Decodes the copy not flanked by disagreeing buffers.
    pub fn estimate_milestone(&self, word: &BitWord) -> Result<u64> {
        check_word(self, word)?;
        let [b1, c1, b2, c2, _] = self.offsets();
        let (b, nc) = (self.buf_len, self.code.len());
        let v1 = classify_buffer(&word.slice(b1, b)).1;
        let v2 = classify_buffer(&word.slice(b2, b)).1;
        // copy 1 sits between disagreeing buffers; otherwise copy 1 is either
        // settled or copy 2 is the one being rewritten
        let trusted = if v1 != v2 { c2 } else { c1 };
        Ok(estimate_j(&self.code, &word.slice(trusted, nc)))
    }
}

impl MilestonePath for FwCode {
    fn path_len(&self) -> usize {
        3 * self.buf_len + 2 * self.code.len()
    }

    fn milestones(&self) -> u64 {
        1u64 << self.code.dim()
    }

    fn path_step(&self) -> u64 {
        (3 * self.buf_len + 2 * self.code.inner().len()) as u64
    }

    fn milestone_word(&self, j: u64) -> BitWord {
        let c = staircase_codeword(&self.code, j);
        let buf = BitWord::filled(self.buf_len, j % 2 == 1);
        BitWord::concat([&buf, &c, &buf, &c, &buf])
    }

    fn flips(&self, j: u64) -> Vec<usize> {
        let rho = ruler_capped(j, self.code.dim() as u32) as usize;
        let support = self.code.row_support(rho);
        let [b1, c1, b2, c2, b3] = self.offsets();
        let b = self.buf_len;
        let mut out = Vec::with_capacity(self.path_step() as usize);
        out.extend(b1..b1 + b);
        out.extend(support.iter().map(|&p| c1 + p));
        out.extend(b2..b2 + b);
        out.extend(support.iter().map(|&p| c2 + p));
        out.extend(b3..b3 + b);
        out
    }
}

impl RobustGrayScheme for FwCode {
    fn kind(&self) -> SchemeKind {
        SchemeKind::Fw
    }

    fn word_len(&self) -> usize {
        self.path_len()
    }

    fn size(&self) -> u64 {
        self.size
    }

    fn step(&self) -> u64 {
        self.path_step()
    }

    fn encode(&self, x: u64) -> Result<BitWord> {
        encode_on_path(self, x)
    }

    fn decode(&self, word: &BitWord) -> Result<u64> {
        let j_hat = self.estimate_milestone(word)?;
        Ok(window_argmin(self, word, j_hat))
    }
}
