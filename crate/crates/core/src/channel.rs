//! Binary symmetric channel with reproducible, order-independent noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitWord;
use crate::error::{Error, Result};

/// Keyed generator for call `index` under `seed`. Distinct indices select
/// distinct ChaCha streams, so calls can run in any order or concurrently.
pub fn keyed_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// BSC with crossover probability `p` in `(0, 1/2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BscChannel {
    p: f64,
    seed: u64,
}

impl BscChannel {
    pub fn new(p: f64, seed: u64) -> Result<Self> {
        if !(p > 0.0 && p < 0.5) {
            return Err(Error::InvalidParameter(format!(
                "crossover probability must lie in (0, 1/2), got {p}"
            )));
        }
        Ok(Self { p, seed })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Flips each bit of `word` independently with probability `p`, using the
    /// noise stream of call `index`.
    pub fn transmit(&self, word: &BitWord, index: u64) -> BitWord {
        flip_bits(word, self.p, &mut keyed_rng(self.seed, index))
    }
}

fn flip_bits<R: Rng>(word: &BitWord, p: f64, rng: &mut R) -> BitWord {
    let mut out = word.clone();
    for i in 0..word.len() {
        if rng.gen_bool(p) {
            out.flip(i);
        }
    }
    out
}

/// Binary entropy in bits; zero at the endpoints.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |q: f64| if q <= 0.0 { 0.0 } else { -q * q.log2() };
    term(p) + term(1.0 - p)
}

/// BSC capacity `1 + p log2 p + (1 - p) log2 (1 - p)`, for `p` in `(0, 1)`.
pub fn capacity(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "capacity needs p in (0, 1), got {p}"
        )));
    }
    Ok(1.0 - binary_entropy(p))
}
