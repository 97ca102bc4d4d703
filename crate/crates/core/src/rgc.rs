//! The coded Gray code.
//!
//! A milestone word is laid out as
//!
//! ```text
//! c^j | buf | B(rho_j, beta^j) | buf | B(rho_j, beta^j) | buf        (j even, buf = 0...0)
//! c^j | buf | B(rho_j, beta^j) | buf | ~B(rho_j, beta^j) | buf       (j odd,  buf = 1...1)
//! ```
//!
//! where `c^j` is the staircase codeword of the `j`th Gray word, `rho_j` the
//! ruler value (the staircase row taking `c^j` to `c^{j+1}`) and `beta^j` the
//! bits of `c^j` on the support of that row. Between milestones the segments
//! are rewritten left to right, one bit per increment: the `c` part first,
//! then each buffer and backup in turn. The backup copy that is not being
//! rewritten always holds enough to roll the `c` part back to a clean
//! codeword.

use std::ops::Range;
use std::sync::Arc;

use crate::bits::BitWord;
use crate::codes::{Backup, BackupCodec, Confidence, StaircaseCode};
use crate::error::{check_len, check_range, Result};
use crate::gray::{gray_bits, gray_index, ruler_capped};
use crate::scheme::{
    check_word, checked_size, encode_on_path, window_argmin, MilestonePath, RobustGrayScheme,
    SchemeKind,
};

/// The six segments of a word, in order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Segment {
    Codeword,
    Buffer1,
    Backup1,
    Buffer2,
    Backup2,
    Buffer3,
}

impl Segment {
    pub const ALL: [Segment; 6] = [
        Segment::Codeword,
        Segment::Buffer1,
        Segment::Backup1,
        Segment::Buffer2,
        Segment::Backup2,
        Segment::Buffer3,
    ];
}

/// Segment geometry and milestone spacing of the coded Gray code.
#[derive(Clone, Debug)]
pub struct CodeLayout {
    code: Arc<StaircaseCode>,
    backup: BackupCodec,
    buf_len: usize,
    offsets: [usize; 7],
    step: u64,
    size: u64,
}

/// A fully assembled milestone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilestoneWord {
    pub j: u64,
    pub word: BitWord,
    /// Staircase codeword `c^j`.
    pub codeword: BitWord,
    pub rho: usize,
    pub beta: BitWord,
    /// `B(rho_j, beta^j)`, uncomplemented.
    pub backup: BitWord,
}

impl MilestoneWord {
    pub fn is_odd(&self) -> bool {
        self.j % 2 == 1
    }
}

/// Ordered flip positions from milestone `j` to milestone `j + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipSchedule {
    pub j: u64,
    pub positions: Vec<usize>,
    /// Exclusive end index into `positions` of each segment's phase.
    pub phase_ends: [usize; 6],
}

impl FlipSchedule {
    /// Positions flipped while rewriting `segment`.
    pub fn phase(&self, segment: Segment) -> &[usize] {
        let i = Segment::ALL.iter().position(|&s| s == segment).unwrap();
        let start = if i == 0 { 0 } else { self.phase_ends[i - 1] };
        &self.positions[start..self.phase_ends[i]]
    }

    /// Length of the backup-1 phase, the distance `d` between consecutive backups.
    pub fn backup_distance(&self) -> usize {
        self.phase(Segment::Backup1).len()
    }
}

/// Buffer reading: below one third ones is `Zero`, above two thirds `One`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BufferLabel {
    Zero,
    One,
    Mixed,
}

/// Classifies a buffer by its fraction of ones. The majority bit is one when
/// at least half the bits are one.
pub fn classify_buffer(bits: &BitWord) -> (BufferLabel, bool) {
    let (ones, len) = (bits.weight(), bits.len());
    let label = if 3 * ones < len {
        BufferLabel::Zero
    } else if 3 * ones > 2 * len {
        BufferLabel::One
    } else {
        BufferLabel::Mixed
    };
    (label, 2 * ones >= len)
}

/// Which backup copy the decoder trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackupSource {
    First,
    Second { complemented: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectedBackup {
    pub rho: usize,
    pub beta: BitWord,
    pub confidence: Confidence,
    pub source: BackupSource,
}

/// Intermediate results of [`CodeLayout::decode_detailed`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub x: u64,
    pub j_hat: u64,
    pub backup: SelectedBackup,
}

impl CodeLayout {
    pub fn new(code: Arc<StaircaseCode>) -> Result<Self> {
        let k = code.dim();
        let nb = code.inner().len();
        let backup = BackupCodec::new(code.inner().clone(), k)?;
        let buf_len = nb;
        let lens = [
            code.len(),
            buf_len,
            backup.len(),
            buf_len,
            backup.len(),
            buf_len,
        ];
        let mut offsets = [0usize; 7];
        for (i, l) in lens.iter().enumerate() {
            offsets[i + 1] = offsets[i] + l;
        }
        let step = (nb + 3 * buf_len + backup.len()) as u64;
        let size = checked_size(k, step)?;
        Ok(Self {
            code,
            backup,
            buf_len,
            offsets,
            step,
            size,
        })
    }

    pub fn code(&self) -> &Arc<StaircaseCode> {
        &self.code
    }

    pub fn backup_codec(&self) -> &BackupCodec {
        &self.backup
    }

    pub fn buf_len(&self) -> usize {
        self.buf_len
    }

    /// Gray dimension `k`.
    pub fn k(&self) -> usize {
        self.code.dim()
    }

    /// Total word length `N`.
    pub fn len(&self) -> usize {
        self.offsets[6]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Milestone spacing `M`.
    pub fn step(&self) -> u64 {
        self.step
    }

    /// Code size `m`.
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn milestone_count(&self) -> u64 {
        1u64 << self.k()
    }

    /// `mu_j = 1 + (j - 1) * M`.
    pub fn milestone_x(&self, j: u64) -> u64 {
        1 + (j - 1) * self.step
    }

    pub fn segment(&self, seg: Segment) -> Range<usize> {
        let i = Segment::ALL.iter().position(|&s| s == seg).unwrap();
        self.offsets[i]..self.offsets[i + 1]
    }

    fn part(&self, word: &BitWord, seg: Segment) -> BitWord {
        let r = self.segment(seg);
        word.slice(r.start, r.len())
    }

    fn codeword(&self, j: u64) -> BitWord {
        let k = self.k();
        let msg = BitWord::from_u64_lsb(gray_bits(j), k);
        self.code
            .encode(&msg)
            .expect("gray word has staircase dimension")
    }

    fn beta(&self, codeword: &BitWord, rho: usize) -> BitWord {
        let support = self.code.row_support(rho);
        let mut beta = BitWord::zeros(support.len());
        for (i, &p) in support.iter().enumerate() {
            beta.set(i, codeword.get(p));
        }
        beta
    }

    fn assemble(&self, j: u64, codeword: BitWord) -> MilestoneWord {
        let rho = ruler_capped(j, self.k() as u32) as usize;
        let beta = self.beta(&codeword, rho);
        let backup = self
            .backup
            .encode(rho, &beta)
            .expect("valid backup payload");
        let odd = j % 2 == 1;
        let buf = BitWord::filled(self.buf_len, odd);
        let second = if odd {
            backup.complement()
        } else {
            backup.clone()
        };
        let word = BitWord::concat([&codeword, &buf, &backup, &buf, &second, &buf]);
        MilestoneWord {
            j,
            word,
            codeword,
            rho,
            beta,
            backup,
        }
    }

    pub fn milestone(&self, j: u64) -> Result<MilestoneWord> {
        check_range("milestone j", j, 1, self.milestone_count())?;
        Ok(self.assemble(j, self.codeword(j)))
    }

    pub fn flip_schedule(&self, j: u64) -> Result<FlipSchedule> {
        check_range("transition j", j, 1, self.milestone_count() - 1)?;
        let from = self.milestone(j)?;
        let mut next_c = from.codeword.clone();
        next_c ^= self.code.row(from.rho);
        let to = self.assemble(j + 1, next_c);

        let mut positions = Vec::with_capacity(self.step as usize);
        let mut phase_ends = [0usize; 6];
        for (i, seg) in Segment::ALL.iter().enumerate() {
            let r = self.segment(*seg);
            match seg {
                Segment::Codeword => positions.extend_from_slice(self.code.row_support(from.rho)),
                Segment::Buffer1 | Segment::Buffer2 | Segment::Buffer3 => positions.extend(r),
                Segment::Backup1 | Segment::Backup2 => {
                    let a = self.part(&from.word, *seg);
                    let b = self.part(&to.word, *seg);
                    positions.extend(a.diff_positions(&b).into_iter().map(|p| p + r.start));
                }
            }
            phase_ends[i] = positions.len();
        }
        debug_assert_eq!(positions.len() as u64, self.step);
        Ok(FlipSchedule {
            j,
            positions,
            phase_ends,
        })
    }

    pub fn encode(&self, x: u64) -> Result<BitWord> {
        encode_on_path(self, x)
    }

    /// Picks the backup copy that is not mid-rewrite, judged by buffer majorities.
    pub fn select_backup(&self, word: &BitWord) -> Result<SelectedBackup> {
        check_word(self, word)?;
        let v1 = classify_buffer(&self.part(word, Segment::Buffer1)).1;
        let v2 = classify_buffer(&self.part(word, Segment::Buffer2)).1;
        let v3 = classify_buffer(&self.part(word, Segment::Buffer3)).1;
        let first = || self.backup.decode(&self.part(word, Segment::Backup1));
        let second = |complemented: bool| {
            let w = self.part(word, Segment::Backup2);
            self.backup
                .decode(&if complemented { w.complement() } else { w })
        };
        let pick = |b: Backup, source| SelectedBackup {
            rho: b.rho,
            beta: b.beta,
            confidence: b.confidence,
            source,
        };
        if v2 != v3 {
            return Ok(pick(first()?, BackupSource::First));
        }
        let complemented = v3;
        let b2 = second(complemented)?;
        if v1 == v2 && b2.confidence == Confidence::Forced {
            let b1 = first()?;
            if b1.confidence == Confidence::Clean {
                return Ok(pick(b1, BackupSource::First));
            }
        }
        Ok(pick(b2, BackupSource::Second { complemented }))
    }

    /// Overwrites the support of row `rho` in `c` with `beta`.
    pub fn roll(&self, c: &BitWord, rho: usize, beta: &BitWord) -> Result<BitWord> {
        check_range("row index rho", rho as u64, 1, self.k() as u64)?;
        check_len("rolled codeword", self.code.len(), c.len())?;
        let support = self.code.row_support(rho);
        check_len("backup beta", support.len(), beta.len())?;
        let mut out = c.clone();
        for (i, &p) in support.iter().enumerate() {
            out.set(p, beta.get(i));
        }
        Ok(out)
    }

    /// Milestone index suggested by the rolled-back codeword part of `word`.
    pub fn estimate_milestone(&self, word: &BitWord) -> Result<(u64, SelectedBackup)> {
        let sel = self.select_backup(word)?;
        let c = self.part(word, Segment::Codeword);
        let rolled = self.roll(&c, sel.rho, &sel.beta)?;
        let g = self.code.decode(&rolled)?;
        Ok((gray_index(&g)?, sel))
    }

    pub fn decode_detailed(&self, word: &BitWord) -> Result<Decoded> {
        let (j_hat, backup) = self.estimate_milestone(word)?;
        let x = window_argmin(self, word, j_hat);
        Ok(Decoded { x, j_hat, backup })
    }

    pub fn decode(&self, word: &BitWord) -> Result<u64> {
        Ok(self.decode_detailed(word)?.x)
    }
}

impl MilestonePath for CodeLayout {
    fn path_len(&self) -> usize {
        self.len()
    }

    fn milestones(&self) -> u64 {
        self.milestone_count()
    }

    fn path_step(&self) -> u64 {
        self.step
    }

    fn milestone_word(&self, j: u64) -> BitWord {
        self.milestone(j).expect("milestone in range").word
    }

    fn flips(&self, j: u64) -> Vec<usize> {
        self.flip_schedule(j)
            .expect("transition in range")
            .positions
    }
}

impl RobustGrayScheme for CodeLayout {
    fn kind(&self) -> SchemeKind {
        SchemeKind::CodedGray
    }

    fn word_len(&self) -> usize {
        self.len()
    }

    fn size(&self) -> u64 {
        self.size
    }

    fn step(&self) -> u64 {
        self.step
    }

    fn encode(&self, x: u64) -> Result<BitWord> {
        CodeLayout::encode(self, x)
    }

    fn decode(&self, word: &BitWord) -> Result<u64> {
        CodeLayout::decode(self, word)
    }
}
