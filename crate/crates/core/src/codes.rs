//! Linear codes: the small inner code, the staircase code stacked from it, and
//! the backup codec that protects a row index plus backed-up bits.

use std::fmt::Write as _;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitWord;
use crate::error::{check_len, check_range, Error, Result};

/// Largest inner block length supported by the exhaustive decoder.
pub const MAX_INNER_LEN: usize = 24;

/// Number of random generator matrices tried by [`InnerCode::random`].
pub const INNER_CANDIDATES: usize = 64;

const RANK_RETRIES: usize = 1000;

/// Above this many `(word, codeword)` pairs the decode table is not built and
/// decoding scans the codeword list instead.
const TABLE_WORK_LIMIT: u64 = 1 << 26;

/// Whether every block of a decode landed within the unique-decoding radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Confidence {
    Clean,
    Forced,
}

impl Confidence {
    pub fn and(self, other: Confidence) -> Confidence {
        if self == Confidence::Clean && other == Confidence::Clean {
            Confidence::Clean
        } else {
            Confidence::Forced
        }
    }
}

/// A binary linear `[n, k]` code with exact nearest-codeword decoding.
///
/// Messages and words are packed LSB-first into `u32`: message bit `t` selects
/// generator row `t`, word bit `i` is position `i`.
#[derive(Clone, Debug)]
pub struct InnerCode {
    k: usize,
    n: usize,
    rows: Vec<u32>,
    codewords: Vec<u32>,
    dmin: usize,
    // word -> (message, distance), present when small enough to tabulate
    table: Option<Vec<(u32, u8)>>,
}

fn gf2_rank(rows: &[u32]) -> usize {
    let mut rows = rows.to_vec();
    let mut rank = 0;
    for bit in 0..32 {
        let mask = 1u32 << bit;
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r] & mask != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && *row & mask != 0 {
                *row ^= p;
            }
        }
        rank += 1;
    }
    rank
}

fn span(rows: &[u32]) -> Vec<u32> {
    let mut words = vec![0u32; 1 << rows.len()];
    for m in 1..words.len() {
        let t = m.trailing_zeros() as usize;
        words[m] = words[m & (m - 1)] ^ rows[t];
    }
    words
}

fn check_dims(k: usize, n: usize) -> Result<()> {
    if k == 0 || k >= n || n > MAX_INNER_LEN {
        return Err(Error::InvalidParameter(format!(
            "inner code needs 1 <= kB < nB <= {MAX_INNER_LEN}, got kB={k} nB={n}"
        )));
    }
    Ok(())
}

impl InnerCode {
    /// Builds a code from explicit generator rows of equal length.
    pub fn from_generator(rows: &[BitWord]) -> Result<Self> {
        let k = rows.len();
        let n = rows.first().map_or(0, BitWord::len);
        check_dims(k, n)?;
        for r in rows {
            check_len("generator row", n, r.len())?;
        }
        let packed: Vec<u32> = rows.iter().map(|r| r.to_u64_lsb() as u32).collect();
        if gf2_rank(&packed) != k {
            return Err(Error::Construction(
                "generator matrix is not full rank".into(),
            ));
        }
        Ok(Self::from_packed(k, n, packed))
    }

    /// Seeded random code: the full-rank candidate with the largest minimum
    /// distance among [`INNER_CANDIDATES`] samples (first one wins ties).
    pub fn random(k: usize, n: usize, seed: u64) -> Result<Self> {
        check_dims(k, n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mask = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        let mut best: Option<(usize, Vec<u32>)> = None;
        for _ in 0..INNER_CANDIDATES {
            let Some(rows) = (0..RANK_RETRIES).find_map(|_| {
                let rows: Vec<u32> = (0..k).map(|_| rng.gen::<u32>() & mask).collect();
                (gf2_rank(&rows) == k).then_some(rows)
            }) else {
                continue;
            };
            let dmin = min_weight(&span(&rows));
            if best.as_ref().is_none_or(|(d, _)| dmin > *d) {
                best = Some((dmin, rows));
            }
        }
        let (_, rows) =
            best.ok_or_else(|| Error::Construction(format!("no full-rank {k}x{n} matrix found")))?;
        Ok(Self::from_packed(k, n, rows))
    }

    fn from_packed(k: usize, n: usize, rows: Vec<u32>) -> Self {
        let codewords = span(&rows);
        let dmin = min_weight(&codewords);
        let table = ((1u64 << n) * codewords.len() as u64 <= TABLE_WORK_LIMIT).then(|| {
            (0..1u32 << n)
                .map(|w| nearest(&codewords, w))
                .map(|(m, d)| (m, d as u8))
                .collect()
        });
        Self {
            k,
            n,
            rows,
            codewords,
            dmin,
            table,
        }
    }

    /// Dimension `kB`.
    pub fn dim(&self) -> usize {
        self.k
    }

    /// Block length `nB`.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn min_distance(&self) -> usize {
        self.dmin
    }

    /// `floor((dmin - 1) / 2)`.
    pub fn correction_radius(&self) -> usize {
        (self.dmin - 1) / 2
    }

    /// Generator row `t` (0-based).
    pub fn row(&self, t: usize) -> BitWord {
        BitWord::from_u64_lsb(self.rows[t] as u64, self.n)
    }

    /// Packed generator rows.
    pub fn packed_rows(&self) -> &[u32] {
        &self.rows
    }

    /// All-ones mask of the block length.
    pub(crate) fn ones_mask(&self) -> u32 {
        ((1u64 << self.n) - 1) as u32
    }

    #[inline]
    pub fn encode_packed(&self, msg: u32) -> u32 {
        self.codewords[msg as usize]
    }

    /// Nearest codeword's message and its distance; ties go to the lowest message.
    #[inline]
    pub fn decode_packed(&self, word: u32) -> (u32, usize) {
        match &self.table {
            Some(t) => {
                let (m, d) = t[word as usize];
                (m, d as usize)
            }
            None => nearest(&self.codewords, word),
        }
    }

    pub fn encode(&self, msg: &BitWord) -> Result<BitWord> {
        check_len("inner message", self.k, msg.len())?;
        Ok(BitWord::from_u64_lsb(
            self.encode_packed(msg.to_u64_lsb() as u32) as u64,
            self.n,
        ))
    }

    pub fn decode(&self, word: &BitWord) -> Result<BitWord> {
        check_len("inner word", self.n, word.len())?;
        let (m, _) = self.decode_packed(word.to_u64_lsb() as u32);
        Ok(BitWord::from_u64_lsb(m as u64, self.k))
    }

    /// Generator matrix as `0`/`1` text, one row per line.
    pub fn generator_text(&self) -> String {
        let mut s = String::new();
        for t in 0..self.k {
            let _ = writeln!(s, "{}", self.row(t));
        }
        s
    }
}

fn min_weight(codewords: &[u32]) -> usize {
    codewords
        .iter()
        .skip(1)
        .map(|c| c.count_ones() as usize)
        .min()
        .unwrap_or(0)
}

fn nearest(codewords: &[u32], word: u32) -> (u32, usize) {
    let mut best = (0u32, usize::MAX);
    for (m, &c) in codewords.iter().enumerate() {
        let d = (c ^ word).count_ones() as usize;
        if d < best.1 {
            best = (m as u32, d);
        }
    }
    best
}

/// The banded code generated by
///
/// ```text
/// [ B  B̄             ]
/// [    B  B̄          ]
/// [        ...  ...  ]
/// [            B  B̄  ]
/// ```
///
/// with `s` block-rows. Dimension `s * kB`, length `(s + 1) * nB`, every row of
/// weight `nB`.
#[derive(Clone, Debug)]
pub struct StaircaseCode {
    inner: Arc<InnerCode>,
    s: usize,
    rows: Vec<BitWord>,
    supports: Vec<Vec<usize>>,
}

impl StaircaseCode {
    pub fn new(inner: Arc<InnerCode>, s: usize) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidParameter("staircase needs s >= 1".into()));
        }
        let (kb, nb) = (inner.dim(), inner.len());
        let nc = (s + 1) * nb;
        let mut rows = Vec::with_capacity(s * kb);
        for i in 0..s {
            for t in 0..kb {
                let b = inner.row(t);
                let mut row = BitWord::zeros(nc);
                row.write_at(i * nb, &b);
                row.write_at((i + 1) * nb, &b.complement());
                rows.push(row);
            }
        }
        if let Some(bad) = rows.iter().position(|r| r.weight() != nb) {
            return Err(Error::Construction(format!(
                "staircase row {} has weight {} != {nb}",
                bad + 1,
                rows[bad].weight()
            )));
        }
        let supports = rows.iter().map(BitWord::support).collect();
        Ok(Self {
            inner,
            s,
            rows,
            supports,
        })
    }

    pub fn inner(&self) -> &Arc<InnerCode> {
        &self.inner
    }

    /// Number of block-rows.
    pub fn blocks(&self) -> usize {
        self.s
    }

    /// Dimension `k = s * kB`.
    pub fn dim(&self) -> usize {
        self.s * self.inner.dim()
    }

    /// Codeword length `(s + 1) * nB`.
    pub fn len(&self) -> usize {
        (self.s + 1) * self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row `r` of the generator matrix, `1 <= r <= k`.
    pub fn row(&self, r: usize) -> &BitWord {
        &self.rows[r - 1]
    }

    /// Positions (0-based, ascending) where row `r` is one.
    pub fn row_support(&self, r: usize) -> &[usize] {
        &self.supports[r - 1]
    }

    /// Generator matrix as `0`/`1` text, one row per line.
    pub fn generator_text(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            let _ = writeln!(s, "{r}");
        }
        s
    }

    fn chunk(&self, msg: &BitWord, i: usize) -> u32 {
        let kb = self.inner.dim();
        let mut v = 0u32;
        for t in 0..kb {
            if msg.get(i * kb + t) {
                v |= 1 << t;
            }
        }
        v
    }

    fn complement_part(&self, chunk: u32) -> u32 {
        // chunk * B̄ = chunk * B + parity(chunk) * 1
        let c = self.inner.encode_packed(chunk);
        if chunk.count_ones() % 2 == 1 {
            c ^ self.inner.ones_mask()
        } else {
            c
        }
    }

    pub fn encode(&self, msg: &BitWord) -> Result<BitWord> {
        check_len("staircase message", self.dim(), msg.len())?;
        let nb = self.inner.len();
        let mut out = BitWord::zeros(self.len());
        let mut prev = 0u32;
        for i in 0..=self.s {
            let cur = if i < self.s { self.chunk(msg, i) } else { 0 };
            let block = self.inner.encode_packed(cur) ^ self.complement_part(prev);
            out.write_at(i * nb, &BitWord::from_u64_lsb(block as u64, nb));
            prev = cur;
        }
        Ok(out)
    }

    /// Block-by-block decoding. The last block is never read.
    pub fn decode(&self, word: &BitWord) -> Result<BitWord> {
        check_len("staircase word", self.len(), word.len())?;
        let (kb, nb) = (self.inner.dim(), self.inner.len());
        let mut msg = BitWord::zeros(self.dim());
        let mut prev = 0u32;
        for i in 0..self.s {
            let y = word.slice(i * nb, nb).to_u64_lsb() as u32 ^ self.complement_part(prev);
            let (chunk, _) = self.inner.decode_packed(y);
            for t in 0..kb {
                if chunk >> t & 1 == 1 {
                    msg.set(i * kb + t, true);
                }
            }
            prev = chunk;
        }
        Ok(msg)
    }
}

/// Outcome of [`BackupCodec::decode`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Backup {
    /// Row index, `1..=k`.
    pub rho: usize,
    pub beta: BitWord,
    pub confidence: Confidence,
}

/// Encodes `(rho, beta)` as `ceil(log2 k)` index bits (MSB first) followed by
/// `beta`, zero padded to whole inner messages, one inner codeword per chunk.
#[derive(Clone, Debug)]
pub struct BackupCodec {
    inner: Arc<InnerCode>,
    k: usize,
    idx_bits: usize,
    n_blocks: usize,
}

/// Clamps a parsed 1-based row index into `1..=k`; out-of-range values are
/// flagged [`Confidence::Forced`].
pub fn clamp_row_index(raw: u64, k: usize) -> (usize, Confidence) {
    if raw == 0 {
        (1, Confidence::Forced)
    } else if raw > k as u64 {
        (k, Confidence::Forced)
    } else {
        (raw as usize, Confidence::Clean)
    }
}

impl BackupCodec {
    pub fn new(inner: Arc<InnerCode>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("backup codec needs k >= 1".into()));
        }
        let idx_bits = (usize::BITS - (k - 1).leading_zeros()).max(1) as usize;
        let payload = idx_bits + inner.len();
        let n_blocks = payload.div_ceil(inner.dim());
        Ok(Self {
            inner,
            k,
            idx_bits,
            n_blocks,
        })
    }

    pub fn index_bits(&self) -> usize {
        self.idx_bits
    }

    pub fn payload_bits(&self) -> usize {
        self.idx_bits + self.inner.len()
    }

    pub fn blocks(&self) -> usize {
        self.n_blocks
    }

    /// Encoded length in bits.
    pub fn len(&self) -> usize {
        self.n_blocks * self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn encode(&self, rho: usize, beta: &BitWord) -> Result<BitWord> {
        check_range("row index rho", rho as u64, 1, self.k as u64)?;
        check_len("backup beta", self.inner.len(), beta.len())?;
        let (kb, nb) = (self.inner.dim(), self.inner.len());
        let mut payload = BitWord::zeros(self.n_blocks * kb);
        let idx = rho - 1;
        for i in 0..self.idx_bits {
            payload.set(i, idx >> (self.idx_bits - 1 - i) & 1 == 1);
        }
        payload.write_at(self.idx_bits, beta);
        let mut out = BitWord::zeros(self.len());
        for b in 0..self.n_blocks {
            let msg = payload.slice(b * kb, kb).to_u64_lsb() as u32;
            let cw = self.inner.encode_packed(msg);
            out.write_at(b * nb, &BitWord::from_u64_lsb(cw as u64, nb));
        }
        Ok(out)
    }

    pub fn decode(&self, word: &BitWord) -> Result<Backup> {
        check_len("backup word", self.len(), word.len())?;
        let (kb, nb) = (self.inner.dim(), self.inner.len());
        let radius = self.inner.correction_radius();
        let mut payload = BitWord::zeros(self.n_blocks * kb);
        let mut confidence = Confidence::Clean;
        for b in 0..self.n_blocks {
            let (msg, dist) = self
                .inner
                .decode_packed(word.slice(b * nb, nb).to_u64_lsb() as u32);
            if dist > radius {
                confidence = Confidence::Forced;
            }
            payload.write_at(b * kb, &BitWord::from_u64_lsb(msg as u64, kb));
        }
        let raw = (0..self.idx_bits).fold(0u64, |acc, i| acc << 1 | payload.get(i) as u64);
        let (rho, flag) = clamp_row_index(raw + 1, self.k);
        Ok(Backup {
            rho,
            beta: payload.slice(self.idx_bits, nb),
            confidence: confidence.and(flag),
        })
    }
}
