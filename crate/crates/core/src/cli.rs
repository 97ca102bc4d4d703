//! Harness behind the `coded-gray` binary: run configuration, the word file
//! format, Monte-Carlo tail sweeps, rate reports and the tape demo.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bits::BitWord;
use crate::channel::{capacity, BscChannel};
use crate::error::{Error, Result};
use crate::scheme::{build_scheme, CodeParams, RobustGrayScheme, SchemeKind};
use crate::tape::{default_tape_len, CollisionPolicy, Tape};

const SAMPLE_KEY: u64 = 0x5eed_5a3b_1e00_0001;

/// Everything a subcommand needs. Built from defaults, then a `key=value`
/// file, then command-line flags.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub params: CodeParams,
    pub p: f64,
    pub channel_seed: u64,
    pub scheme: SchemeKind,
    pub trials: u64,
    /// Tail thresholds; empty means [`RunConfig::t_grid_for`].
    pub t_grid: Vec<u64>,
    pub output: Option<PathBuf>,
    pub tape_len: Option<usize>,
    pub tape_seed: u64,
    pub randomize_all_collisions: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: CodeParams::new(4, 8, 4),
            p: 0.05,
            channel_seed: 1,
            scheme: SchemeKind::CodedGray,
            trials: 10_000,
            t_grid: Vec::new(),
            output: None,
            tape_len: None,
            tape_seed: 1,
            randomize_all_collisions: false,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad value {value:?} for {key}")))
}

/// Parses a comma-separated list of thresholds.
pub fn parse_t_grid(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| parse_value("t_grid", t))
        .collect()
}

impl RunConfig {
    /// Applies one `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key.trim() {
            "kb" => self.params.kb = parse_value(key, value)?,
            "nb" => self.params.nb = parse_value(key, value)?,
            "s" => self.params.s = parse_value(key, value)?,
            "inner_seed" => self.params.inner_seed = parse_value(key, value)?,
            "p" => self.p = parse_value(key, value)?,
            "channel_seed" => self.channel_seed = parse_value(key, value)?,
            "scheme" => self.scheme = value.trim().parse()?,
            "trials" => self.trials = parse_value(key, value)?,
            "t_grid" => self.t_grid = parse_t_grid(value)?,
            "output" => self.output = Some(PathBuf::from(value.trim())),
            "tape_len" => self.tape_len = Some(parse_value(key, value)?),
            "tape_seed" => self.tape_seed = parse_value(key, value)?,
            "randomize_all_collisions" => self.randomize_all_collisions = parse_value(key, value)?,
            other => return Err(Error::Parse(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Applies a flat `key=value` text; blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key=value", n + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        self.apply_text(&text)
    }

    pub fn build(&self) -> Result<Box<dyn RobustGrayScheme>> {
        self.build_kind(self.scheme)
    }

    pub fn build_kind(&self, kind: SchemeKind) -> Result<Box<dyn RobustGrayScheme>> {
        build_scheme(kind, self.params.staircase()?)
    }

    pub fn channel(&self) -> Result<BscChannel> {
        BscChannel::new(self.p, self.channel_seed)
    }

    /// Thresholds to report: the configured grid, or fractions and multiples
    /// of the milestone step.
    pub fn t_grid_for(&self, step: u64) -> Vec<u64> {
        if !self.t_grid.is_empty() {
            return self.t_grid.clone();
        }
        let mut grid = vec![
            0,
            1,
            step / 8,
            step / 4,
            step / 2,
            step,
            2 * step,
            3 * step,
            5 * step,
            10 * step,
        ];
        grid.sort_unstable();
        grid.dedup();
        grid
    }
}

/// Serializes a word: 8-byte little-endian bit length, then MSB-first packed bytes.
pub fn word_to_file_bytes(word: &BitWord) -> Vec<u8> {
    let mut out = (word.len() as u64).to_le_bytes().to_vec();
    out.extend(word.to_bytes());
    out
}

pub fn word_from_file_bytes(bytes: &[u8]) -> Result<BitWord> {
    let header: [u8; 8] = bytes
        .get(..8)
        .and_then(|h| h.try_into().ok())
        .ok_or_else(|| Error::Parse("word file shorter than its 8-byte header".into()))?;
    let n = usize::try_from(u64::from_le_bytes(header))
        .map_err(|_| Error::Parse("word length does not fit in memory".into()))?;
    let body = &bytes[8..];
    if body.len() != n.div_ceil(8) {
        return Err(Error::Parse(format!(
            "word file declares {n} bits but carries {} bytes",
            body.len()
        )));
    }
    BitWord::from_bytes(body, n).ok_or_else(|| Error::Parse("truncated word file".into()))
}

pub fn write_word_file(path: &Path, word: &BitWord) -> io::Result<()> {
    fs::write(path, word_to_file_bytes(word))
}

pub fn read_word_file(path: &Path) -> Result<BitWord> {
    let bytes = fs::read(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    word_from_file_bytes(&bytes)
}

/// Lines printed by `encode`.
pub fn encode_report(scheme: &dyn RobustGrayScheme, x: u64) -> Result<(BitWord, String)> {
    let word = scheme.encode(x)?;
    let text = format!(
        "scheme={}\nx={x}\nword={}\nN={}\nm={}\nM={}\n",
        scheme.kind(),
        word.to_hex(),
        scheme.word_len(),
        scheme.size(),
        scheme.step()
    );
    Ok((word, text))
}

/// Wilson score interval at 95% for `k` successes out of `n`.
pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = n as f64;
    let phat = k as f64 / n;
    let denom = 1.0 + z * z / n;
    let center = (phat + z * z / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Absolute decoding error `|decode(BSC(encode(x))) - x|` of every trial.
/// Trial `i` draws `x` and its channel noise from streams keyed by `i`, so the
/// result does not depend on scheduling.
pub fn simulate_errors(
    scheme: &dyn RobustGrayScheme,
    channel: &BscChannel,
    trials: u64,
) -> Vec<u64> {
    let m = scheme.size();
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(channel.seed() ^ SAMPLE_KEY);
            rng.set_stream(i);
            let x = rng.gen_range(1..=m);
            let word = scheme.encode(x).expect("x sampled in range");
            let noisy = channel.transmit(&word, i);
            let x_hat = scheme.decode(&noisy).expect("word has scheme length");
            x_hat.abs_diff(x)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct TailRow {
    pub t: u64,
    pub exceed: u64,
    pub trials: u64,
    pub survival: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Empirical `Pr{|x_hat - x| > t}` for each `t` in `grid`.
pub fn survival_rows(errors: &[u64], grid: &[u64]) -> Vec<TailRow> {
    let mut sorted = errors.to_vec();
    sorted.sort_unstable();
    let n = sorted.len() as u64;
    grid.iter()
        .map(|&t| {
            let at_most = sorted.partition_point(|&e| e <= t) as u64;
            let exceed = n - at_most;
            let (lo, hi) = wilson_interval(exceed, n);
            TailRow {
                t,
                exceed,
                trials: n,
                survival: if n == 0 {
                    0.0
                } else {
                    exceed as f64 / n as f64
                },
                ci_low: lo,
                ci_high: hi,
            }
        })
        .collect()
}

pub fn tail_sweep(config: &RunConfig) -> Result<Vec<TailRow>> {
    if config.trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let scheme = config.build()?;
    let channel = config.channel()?;
    let errors = simulate_errors(scheme.as_ref(), &channel, config.trials);
    Ok(survival_rows(&errors, &config.t_grid_for(scheme.step())))
}

pub fn write_tail_csv<W: Write>(out: W, config: &RunConfig, rows: &[TailRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Parse(format!("csv: {e}"));
    w.write_record([
        "t", "survival", "ci_low", "ci_high", "exceed", "trials", "p", "scheme",
    ])
    .map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.t.to_string(),
            format!("{:.6e}", r.survival),
            format!("{:.6e}", r.ci_low),
            format!("{:.6e}", r.ci_high),
            r.exceed.to_string(),
            r.trials.to_string(),
            config.p.to_string(),
            config.scheme.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Parse(format!("csv: {e}")))?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateRow {
    pub scheme: SchemeKind,
    pub n: usize,
    pub m: u64,
    pub rate: f64,
    pub capacity: f64,
    pub gap: f64,
}

/// Word length, code size and rate of every scheme over the same staircase code.
pub fn rate_report(config: &RunConfig) -> Result<Vec<RateRow>> {
    let cap = capacity(config.p)?;
    let code = config.params.staircase()?;
    SchemeKind::ALL
        .iter()
        .map(|&kind| {
            let s = build_scheme(kind, code.clone())?;
            let rate = s.rate();
            Ok(RateRow {
                scheme: kind,
                n: s.word_len(),
                m: s.size(),
                rate,
                capacity: cap,
                gap: cap - rate,
            })
        })
        .collect()
}

pub fn write_rate_csv<W: Write>(out: W, rows: &[RateRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Parse(format!("csv: {e}"));
    w.write_record(["scheme", "N", "m", "rate", "capacity", "gap"])
        .map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.scheme.to_string(),
            r.n.to_string(),
            r.m.to_string(),
            format!("{:.6}", r.rate),
            format!("{:.6}", r.capacity),
            format!("{:.6}", r.gap),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Parse(format!("csv: {e}")))?;
    Ok(())
}

/// Reads `index value` pairs, one per line, separated by a comma or whitespace.
pub fn parse_entries(text: &str) -> Result<BTreeMap<u64, u64>> {
    let mut entries = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .collect();
        let [index, value] = fields[..] else {
            return Err(Error::Parse(format!(
                "line {}: expected `index value`",
                n + 1
            )));
        };
        let index = parse_value("index", index)?;
        if entries
            .insert(index, parse_value("value", value)?)
            .is_some()
        {
            return Err(Error::Parse(format!(
                "line {}: duplicate index {index}",
                n + 1
            )));
        }
    }
    Ok(entries)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TapeDemoRow {
    pub index: u64,
    pub value: u64,
    pub decoded: u64,
}

/// Builds a tape from `entries` and queries each one back.
pub fn tape_demo(
    config: &RunConfig,
    entries: &BTreeMap<u64, u64>,
) -> Result<(BitWord, Vec<TapeDemoRow>)> {
    let scheme = config.build()?;
    let t = config
        .tape_len
        .unwrap_or_else(|| default_tape_len(entries.len(), scheme.word_len()));
    let policy = if config.randomize_all_collisions {
        CollisionPolicy::RandomizeAll
    } else {
        CollisionPolicy::RandomizeConflicts
    };
    let tape = Tape::build(entries, scheme.as_ref(), t, config.tape_seed, policy)?;
    let rows = entries
        .iter()
        .map(|(&index, &value)| TapeDemoRow {
            index,
            value,
            decoded: tape.query(index),
        })
        .collect();
    Ok((tape.cells().clone(), rows))
}

pub fn write_tape_csv<W: Write>(out: W, rows: &[TapeDemoRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Parse(format!("csv: {e}"));
    w.write_record(["index", "value", "decoded", "abs_error"])
        .map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.index.to_string(),
            r.value.to_string(),
            r.decoded.to_string(),
            r.decoded.abs_diff(r.value).to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Parse(format!("csv: {e}")))?;
    Ok(())
}
