//! Sparse counters on a shared noisy tape.
//!
//! Each entry's encoded word is scattered over pseudorandom positions of a
//! tape. Cells nobody wrote, and cells where writers disagree, get fair coin
//! flips. A query gathers the entry's positions and decodes whatever it finds.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitWord;
use crate::channel::keyed_rng;
use crate::error::{check_range, Error, Result};
use crate::scheme::RobustGrayScheme;

const FILL_KEY: u64 = 0x7a70_e5f1_11c0_1115;

/// How multiply-written cells are resolved.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CollisionPolicy {
    /// Randomize only cells whose writers disagree.
    #[default]
    RandomizeConflicts,
    /// Randomize every cell written more than once.
    RandomizeAll,
}

/// `n` distinct positions in `0..t`, determined by `(seed, index)`.
pub fn positions_for(seed: u64, index: u64, n: usize, t: usize) -> Result<Vec<usize>> {
    if n > t {
        return Err(Error::InvalidParameter(format!(
            "cannot place {n} bits on a tape of {t} cells"
        )));
    }
    Ok(sample(&mut keyed_rng(seed, index), t, n).into_vec())
}

/// Default tape length `8 * entries * N` (at least `N`).
pub fn default_tape_len(entries: usize, word_len: usize) -> usize {
    (8 * entries * word_len).max(word_len)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Cell {
    Empty,
    Bit { value: bool, writers: u32 },
    Conflict,
}

pub struct Tape<'a> {
    cells: BitWord,
    seed: u64,
    scheme: &'a dyn RobustGrayScheme,
}

impl<'a> Tape<'a> {
    /// Writes every entry (`index -> value`) onto a tape of `t` cells.
    pub fn build(
        entries: &BTreeMap<u64, u64>,
        scheme: &'a dyn RobustGrayScheme,
        t: usize,
        seed: u64,
        policy: CollisionPolicy,
    ) -> Result<Self> {
        let n = scheme.word_len();
        let mut cells = vec![Cell::Empty; t];
        for (&index, &value) in entries {
            check_range("tape value", value, 1, scheme.size())?;
            let word = scheme.encode(value)?;
            for (i, pos) in positions_for(seed, index, n, t)?.into_iter().enumerate() {
                let bit = word.get(i);
                cells[pos] = match cells[pos] {
                    Cell::Empty => Cell::Bit {
                        value: bit,
                        writers: 1,
                    },
                    Cell::Bit { value, writers } if value == bit => Cell::Bit {
                        value,
                        writers: writers + 1,
                    },
                    _ => Cell::Conflict,
                };
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ FILL_KEY);
        let mut tape = BitWord::zeros(t);
        for (pos, cell) in cells.iter().enumerate() {
            let bit = match *cell {
                Cell::Bit { value, writers: 1 } => value,
                Cell::Bit { value, .. } if policy == CollisionPolicy::RandomizeConflicts => value,
                _ => rng.gen(),
            };
            tape.set(pos, bit);
        }
        Ok(Self {
            cells: tape,
            seed,
            scheme,
        })
    }

    pub fn cells(&self) -> &BitWord {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// The bits stored for `index`, in word order.
    pub fn gather(&self, index: u64) -> BitWord {
        let n = self.scheme.word_len();
        let positions = positions_for(self.seed, index, n, self.cells.len())
            .expect("tape is at least one word long");
        let mut w = BitWord::zeros(n);
        for (i, p) in positions.into_iter().enumerate() {
            w.set(i, self.cells.get(p));
        }
        w
    }

    /// Fuzzy value of `index`. Absent indices decode to arbitrary values.
    pub fn query(&self, index: u64) -> u64 {
        self.scheme
            .decode(&self.gather(index))
            .expect("gathered word has scheme length")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rgc::CodeLayout;
    use crate::scheme::CodeParams;

    fn scheme() -> CodeLayout {
        CodeLayout::new(CodeParams::new(2, 4, 2).staircase().unwrap()).unwrap()
    }

    #[test]
    fn positions_distinct_and_deterministic() {
        let a = positions_for(5, 9, 40, 100).unwrap();
        assert_eq!(a, positions_for(5, 9, 40, 100).unwrap());
        let mut s = a.clone();
        s.sort_unstable();
        s.dedup();
        assert_eq!(s.len(), 40);
        assert!(a.iter().all(|&p| p < 100));
        assert_ne!(a, positions_for(5, 10, 40, 100).unwrap());
        assert!(positions_for(5, 9, 101, 100).is_err());
    }

    #[test]
    fn collision_rate_matches_birthday_estimate() {
        // two independent n-subsets of [t] share n^2 / t positions on average
        let (n, t) = (48usize, 2000usize);
        let trials = 2000u64;
        let mut total = 0usize;
        for i in 0..trials {
            let a = positions_for(i, 0, n, t).unwrap();
            let b: std::collections::HashSet<_> =
                positions_for(i, 1, n, t).unwrap().into_iter().collect();
            total += a.iter().filter(|p| b.contains(p)).count();
        }
        let mean = total as f64 / trials as f64;
        let expect = (n * n) as f64 / t as f64;
        assert!((mean - expect).abs() < 0.1 * expect, "{mean} vs {expect}");
    }

    #[test]
    fn empty_tape_is_random_and_deterministic() {
        let s = scheme();
        let none = BTreeMap::new();
        let a = Tape::build(&none, &s, 4000, 1, CollisionPolicy::default()).unwrap();
        let b = Tape::build(&none, &s, 4000, 1, CollisionPolicy::default()).unwrap();
        assert_eq!(a.cells(), b.cells());
        let ones = a.cells().weight() as f64 / 4000.0;
        assert!((ones - 0.5).abs() < 0.05);
    }

    #[test]
    fn single_entry_full_tape_is_the_codeword() {
        let s = scheme();
        let n = s.len();
        let entries = BTreeMap::from([(3u64, 77u64)]);
        let tape = Tape::build(&entries, &s, n, 11, CollisionPolicy::default()).unwrap();
        assert_eq!(tape.gather(3), s.encode(77).unwrap());
        assert_eq!(tape.query(3), 77);
    }

    #[test]
    fn value_out_of_range() {
        let s = scheme();
        let entries = BTreeMap::from([(0u64, 0u64)]);
        assert!(Tape::build(&entries, &s, 1000, 1, CollisionPolicy::default()).is_err());
        let entries = BTreeMap::from([(0u64, s.size() + 1)]);
        assert!(Tape::build(&entries, &s, 1000, 1, CollisionPolicy::default()).is_err());
    }

    #[test]
    fn corruption_comes_from_shared_cells() {
        // with several entries, a query's wrong bits all sit on cells another
        // entry also wrote; agreeing shared cells are never corrupted
        let s = scheme();
        let n = s.len();
        let entries: BTreeMap<u64, u64> = (0..5u64).map(|i| (i, 1 + 37 * i)).collect();
        let t = 10 * entries.len() * n;
        let tape = Tape::build(&entries, &s, t, 99, CollisionPolicy::RandomizeConflicts).unwrap();
        let mut owners = vec![0u32; t];
        for &i in entries.keys() {
            for p in positions_for(99, i, n, t).unwrap() {
                owners[p] += 1;
            }
        }
        for (&i, &v) in &entries {
            let truth = s.encode(v).unwrap();
            let got = tape.gather(i);
            let pos = positions_for(99, i, n, t).unwrap();
            for b in got.diff_positions(&truth) {
                assert!(owners[pos[b]] >= 2);
            }
        }
    }
}
