//! The common robust Gray code interface and the milestone-path machinery
//! shared by every construction.
//!
//! Each construction places full "milestone" words at `x = 1 + (j - 1) * M` for
//! `j = 1..=2^k` and walks between consecutive milestones one bit at a time
//! along a fixed flip schedule. Encoding replays a prefix of that schedule;
//! decoding estimates `j` and then minimizes Hamming distance over a window of
//! milestones by walking the same schedule.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::baselines::{FwCode, Lp4Code};
use crate::bits::BitWord;
use crate::codes::{InnerCode, StaircaseCode};
use crate::error::{check_len, check_range, Error, Result};
use crate::gray::MAX_GRAY_BITS;
use crate::rgc::CodeLayout;

/// Encoder/decoder pair mapping `1..=m` to binary words of length `N`.
pub trait RobustGrayScheme: Send + Sync {
    fn kind(&self) -> SchemeKind;

    /// Word length `N`.
    fn word_len(&self) -> usize;

    /// Code size `m`.
    fn size(&self) -> u64;

    /// Distance between consecutive milestones.
    fn step(&self) -> u64;

    fn encode(&self, x: u64) -> Result<BitWord>;

    /// Best-effort estimate of the encoded integer. Only fails on a length
    /// mismatch.
    fn decode(&self, word: &BitWord) -> Result<u64>;

    fn rate(&self) -> f64 {
        (self.size() as f64).log2() / self.word_len() as f64
    }
}

/// A sequence of milestone words joined by single-bit flip schedules.
pub trait MilestonePath {
    fn path_len(&self) -> usize;

    /// Number of milestones, `2^k`.
    fn milestones(&self) -> u64;

    /// Flips per transition, `M`.
    fn path_step(&self) -> u64;

    /// Milestone word `j`, `1 <= j <= milestones()`.
    fn milestone_word(&self, j: u64) -> BitWord;

    /// Ordered positions that turn milestone `j` into milestone `j + 1`.
    fn flips(&self, j: u64) -> Vec<usize>;

    /// The integer encoded by milestone `j`.
    fn milestone_x(&self, j: u64) -> u64 {
        1 + (j - 1) * self.path_step()
    }

    /// Code size `(2^k - 1) * M + 1`.
    fn path_size(&self) -> u64 {
        (self.milestones() - 1) * self.path_step() + 1
    }
}

/// Splits `x` into its transition `j` and the number of flips `r` applied.
pub fn locate<P: MilestonePath + ?Sized>(path: &P, x: u64) -> Result<(u64, u64)> {
    check_range("x", x, 1, path.path_size())?;
    let m = path.path_step();
    Ok((1 + (x - 1) / m, (x - 1) % m))
}

/// Milestone `j` with the first `r` flips of its schedule applied.
pub fn encode_on_path<P: MilestonePath + ?Sized>(path: &P, x: u64) -> Result<BitWord> {
    let (j, r) = locate(path, x)?;
    let mut w = path.milestone_word(j);
    if r > 0 {
        for pos in path.flips(j).into_iter().take(r as usize) {
            w.flip(pos);
        }
    }
    Ok(w)
}

/// Milestone range `[max(j-1, 1), min(j+1, 2^k)]` searched around an estimate.
pub fn window_bounds(milestones: u64, j_hat: u64) -> (u64, u64) {
    (j_hat.saturating_sub(1).max(1), (j_hat + 1).min(milestones))
}

/// The `x` in the window around `j_hat` whose encoding is closest to `word`,
/// smallest `x` on ties. Distances are updated by one per flip instead of
/// being recomputed.
pub fn window_argmin<P: MilestonePath + ?Sized>(path: &P, word: &BitWord, j_hat: u64) -> u64 {
    let (lo, hi) = window_bounds(path.milestones(), j_hat);
    let mut cur = path.milestone_word(lo);
    let mut dist = cur.distance(word) as i64;
    let mut x = path.milestone_x(lo);
    let (mut best_x, mut best_d) = (x, dist);
    for t in lo..hi {
        for pos in path.flips(t) {
            dist += if cur.get(pos) == word.get(pos) { 1 } else { -1 };
            cur.flip(pos);
            x += 1;
            if dist < best_d {
                best_d = dist;
                best_x = x;
            }
        }
    }
    best_x
}

pub(crate) fn check_word<P: MilestonePath + ?Sized>(path: &P, word: &BitWord) -> Result<()> {
    check_len("received word", path.path_len(), word.len())
}

/// Which construction to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    /// Four repeated copies, one interpolated at a time.
    Lp4,
    /// Two copies separated by constant buffers.
    Fw,
    /// Gray-ordered staircase codeword plus buffered backups.
    CodedGray,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 3] = [SchemeKind::Lp4, SchemeKind::Fw, SchemeKind::CodedGray];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeKind::Lp4 => "lp4",
            SchemeKind::Fw => "fw",
            SchemeKind::CodedGray => "coded-gray",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lp4" => Ok(SchemeKind::Lp4),
            "fw" => Ok(SchemeKind::Fw),
            "coded-gray" => Ok(SchemeKind::CodedGray),
            other => Err(Error::Parse(format!(
                "unknown scheme {other:?} (expected lp4, fw or coded-gray)"
            ))),
        }
    }
}

/// Inner code and staircase parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeParams {
    pub kb: usize,
    pub nb: usize,
    pub s: usize,
    pub inner_seed: u64,
}

impl CodeParams {
    pub fn new(kb: usize, nb: usize, s: usize) -> Self {
        Self {
            kb,
            nb,
            s,
            inner_seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.inner_seed = seed;
        self
    }

    pub fn inner_code(&self) -> Result<Arc<InnerCode>> {
        Ok(Arc::new(InnerCode::random(
            self.kb,
            self.nb,
            self.inner_seed,
        )?))
    }

    pub fn staircase(&self) -> Result<Arc<StaircaseCode>> {
        let k = self.kb.saturating_mul(self.s);
        if self.s == 0 || k > MAX_GRAY_BITS as usize {
            return Err(Error::InvalidParameter(format!(
                "need 1 <= s and s * kB <= {MAX_GRAY_BITS}, got s={} kB={}",
                self.s, self.kb
            )));
        }
        Ok(Arc::new(StaircaseCode::new(self.inner_code()?, self.s)?))
    }
}

/// Builds the chosen construction over the same staircase code.
pub fn build_scheme(
    kind: SchemeKind,
    code: Arc<StaircaseCode>,
) -> Result<Box<dyn RobustGrayScheme>> {
    Ok(match kind {
        SchemeKind::Lp4 => Box::new(Lp4Code::new(code)?),
        SchemeKind::Fw => Box::new(FwCode::new(code)?),
        SchemeKind::CodedGray => Box::new(CodeLayout::new(code)?),
    })
}

/// `(2^k - 1) * step + 1`, or an error if it does not fit in a `u64`.
pub(crate) fn checked_size(k: usize, step: u64) -> Result<u64> {
    let count = 1u64
        .checked_shl(k as u32)
        .filter(|_| k < 64)
        .ok_or_else(|| Error::InvalidParameter(format!("k = {k} too large")))?;
    (count - 1)
        .checked_mul(step)
        .and_then(|v| v.checked_add(1))
        .ok_or_else(|| {
            Error::InvalidParameter(format!("code size overflows u64 (k = {k}, M = {step})"))
        })
}
