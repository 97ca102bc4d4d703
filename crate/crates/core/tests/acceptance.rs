//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p coded-gray --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use coded_gray::channel::{capacity, BscChannel};
use coded_gray::cli::{simulate_errors, survival_rows, RunConfig};
use coded_gray::rgc::Segment;
use coded_gray::scheme::{window_bounds, MilestonePath};
use coded_gray::tape::{CollisionPolicy, Tape};
use coded_gray::{BitWord, CodeLayout, CodeParams, RobustGrayScheme, SchemeKind};

struct Outcome {
    pass: bool,
    detail: String,
}

fn layout(kb: usize, nb: usize, s: usize) -> CodeLayout {
    CodeLayout::new(CodeParams::new(kb, nb, s).staircase().unwrap()).unwrap()
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed <= Duration::from_secs(limit_secs)
}

/// Criterion 1: Consecutive encodings differ in exactly one bit, exhaustively.
fn unit_increment() -> Outcome {
    let start = Instant::now();
    let mut detail = Vec::new();
    let mut pass = true;
    for (kb, nb, s) in [(2, 4, 2), (2, 4, 3)] {
        let l = layout(kb, nb, s);
        let mut prev = l.encode(1).unwrap();
        let mut bad = 0u64;
        for x in 2..=l.size() {
            let w = l.encode(x).unwrap();
            if prev.distance(&w) != 1 {
                bad += 1;
            }
            prev = w;
        }
        pass &= bad == 0;
        detail.push(format!("({kb},{nb},{s}) m={} violations={bad}", l.size()));
    }
    let elapsed = start.elapsed();
    pass &= within(elapsed, 10);
    Outcome {
        pass,
        detail: format!("{}; {:.2?} (limit 10s)", detail.join(", "), elapsed),
    }
}

/// Criterion 2: Every pair of consecutive milestones is exactly M apart.
fn milestone_spacing() -> Outcome {
    let mut detail = Vec::new();
    let mut pass = true;
    for (kb, nb, s) in [(2, 4, 2), (2, 4, 3)] {
        let l = layout(kb, nb, s);
        let m = l.step() as usize;
        let mut bad = 0;
        let mut prev = l.milestone(1).unwrap().word;
        for j in 2..=l.milestone_count() {
            let w = l.milestone(j).unwrap().word;
            if prev.distance(&w) != m {
                bad += 1;
            }
            prev = w;
        }
        pass &= bad == 0;
        detail.push(format!("({kb},{nb},{s}) M={m} violations={bad}"));
    }
    Outcome {
        pass,
        detail: detail.join(", "),
    }
}

/// Criterion 3: Noiseless round trip: exhaustive at (2,4,2), 10^4 samples at (4,8,4).
fn noiseless_roundtrip() -> Outcome {
    let start = Instant::now();
    let small = layout(2, 4, 2);
    let bad_small = (1..=small.size())
        .filter(|&x| small.decode(&small.encode(x).unwrap()).unwrap() != x)
        .count();
    let big = layout(4, 8, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let bad_big = (0..10_000)
        .filter(|_| {
            let x = rng.gen_range(1..=big.size());
            big.decode(&big.encode(x).unwrap()).unwrap() != x
        })
        .count();
    let elapsed = start.elapsed();
    Outcome {
        pass: bad_small == 0 && bad_big == 0 && within(elapsed, 60),
        detail: format!(
            "(2,4,2) all {} x: {bad_small} errors; (4,8,4) 10^4 samples: {bad_big} errors; {:.2?} (limit 60s)",
            small.size(),
            elapsed
        ),
    }
}

/// Criterion 4: Rolling back any prefix of the codeword phase restores c^j exactly.
fn rollback_exactness() -> Outcome {
    let l = layout(2, 4, 2);
    let c_range = l.segment(Segment::Codeword);
    let mut checked = 0;
    let mut bad = 0;
    for j in 1..l.milestone_count() {
        let m = l.milestone(j).unwrap();
        let sched = l.flip_schedule(j).unwrap();
        for r in 0..=sched.phase(Segment::Codeword).len() as u64 {
            let w = l.encode(l.milestone_x(j) + r).unwrap();
            let c = w.slice(c_range.start, c_range.len());
            checked += 1;
            if l.roll(&c, m.rho, &m.beta).unwrap() != m.codeword {
                bad += 1;
            }
        }
    }
    Outcome {
        pass: bad == 0,
        detail: format!("{checked} (transition, prefix) pairs, {bad} mismatches"),
    }
}

/// Criterion 5: Sequential staircase decoding matches exhaustive nearest-codeword search
/// for every message and every pattern with at most one flip per block.
fn staircase_vs_brute_force() -> Outcome {
    let code = CodeParams::new(2, 4, 2).staircase().unwrap();
    let (k, nb, blocks) = (code.dim(), code.inner().len(), code.blocks() + 1);
    let cws: Vec<BitWord> = (0..1u64 << k)
        .map(|m| code.encode(&BitWord::from_u64_lsb(m, k)).unwrap())
        .collect();
    let patterns = (nb + 1).pow(blocks as u32);
    let (mut total, mut agree) = (0u64, 0u64);
    for cw in &cws {
        for pat in 0..patterns {
            let mut w = cw.clone();
            let mut rest = pat;
            for b in 0..blocks {
                let e = rest % (nb + 1);
                rest /= nb + 1;
                if e > 0 {
                    w.flip(b * nb + e - 1);
                }
            }
            let brute = (0..cws.len())
                .min_by_key(|&c| (cws[c].distance(&w), c))
                .unwrap() as u64;
            let seq = code.decode(&w).unwrap().to_u64_lsb();
            total += 1;
            agree += (seq == brute) as u64;
        }
    }
    Outcome {
        pass: agree == total,
        detail: format!(
            "inner dmin={} (every [4,2] code has dmin <= 2); agree {agree}/{total}",
            code.inner().min_distance()
        ),
    }
}

/// Criterion 6: Empirical tail at (4,8,4), p = 0.05, 10^5 trials.
fn empirical_tail() -> Outcome {
    let start = Instant::now();
    let l = layout(4, 8, 4);
    let m = l.step();
    let ch = BscChannel::new(0.05, 1).unwrap();
    let errors = simulate_errors(&l, &ch, 100_000);
    let grid: Vec<u64> = (0..=4 * m).collect();
    let rows = survival_rows(&errors, &grid);
    let at = |t: u64| rows[t as usize].survival;
    let monotone = rows.windows(2).all(|w| w[1].survival <= w[0].survival);
    let half = at(m / 2);
    let (quarter, three) = (at(m / 4), at(3 * m));
    let decay_ok = (quarter < 1e-3 && three < 1e-3) || three * 5.0 <= quarter;
    let elapsed = start.elapsed();
    Outcome {
        pass: monotone && half < 0.05 && decay_ok && within(elapsed, 300),
        detail: format!(
            "(i) monotone={monotone}; (ii) S(M/2={})={half:.4} (< 0.05: {}); (iii) S(M/4)={quarter:.4}, S(3M)={three:.4} (factor >= 5 or floor: {decay_ok}); {:.2?}",
            m / 2,
            half < 0.05,
            elapsed
        ),
    }
}

/// Criterion 7: rate(lp4) < rate(fw) < rate(coded-gray) < capacity(0.05) over a shared code.
fn rate_ordering() -> Outcome {
    let config = RunConfig {
        params: CodeParams::new(4, 8, 12),
        p: 0.05,
        ..RunConfig::default()
    };
    let cap = capacity(config.p).unwrap();
    let schemes: Vec<Box<dyn RobustGrayScheme>> =
        [SchemeKind::Lp4, SchemeKind::Fw, SchemeKind::CodedGray]
            .iter()
            .map(|&k| config.build_kind(k).unwrap())
            .collect();
    // log2(a.m) / a.N < log2(b.m) / b.N  <=>  a.m^b.N < b.m^a.N
    let less = |a: &dyn RobustGrayScheme, b: &dyn RobustGrayScheme| {
        BigUint::from(a.size()).pow(b.word_len() as u32)
            < BigUint::from(b.size()).pow(a.word_len() as u32)
    };
    let ordered = less(schemes[0].as_ref(), schemes[1].as_ref())
        && less(schemes[1].as_ref(), schemes[2].as_ref());
    let below_cap = schemes.iter().all(|s| s.rate() < cap);
    let lengths = schemes[2].word_len() < schemes[1].word_len()
        && schemes[1].word_len() < schemes[0].word_len();
    Outcome {
        pass: ordered && below_cap && lengths,
        detail: format!(
            "(4,8,12): {} ; capacity={cap:.4}",
            schemes
                .iter()
                .map(|s| format!("{} N={} rate={:.4}", s.kind(), s.word_len(), s.rate()))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    }
}

/// Criterion 8: The incremental window walk equals naive recomputation at every candidate.
fn incremental_argmin() -> Outcome {
    let l = layout(2, 4, 2);
    let ch = BscChannel::new(0.1, 8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut bad = 0;
    for i in 0..1000u64 {
        let x = rng.gen_range(1..=l.size());
        let noisy = ch.transmit(&l.encode(x).unwrap(), i);
        let (j_hat, _) = l.estimate_milestone(&noisy).unwrap();
        let (lo, hi) = window_bounds(l.milestones(), j_hat);
        let naive = (l.milestone_x(lo)..=l.milestone_x(hi))
            .min_by_key(|&c| (l.encode(c).unwrap().distance(&noisy), c))
            .unwrap();
        if l.decode(&noisy).unwrap() != naive {
            bad += 1;
        }
    }
    Outcome {
        pass: bad == 0,
        detail: format!("1000 noisy words at p=0.1, {bad} disagreements"),
    }
}

/// Criterion 9: A lone entry on a tape of 8N cells is recovered exactly.
fn tape_recovery() -> Outcome {
    let l = layout(4, 8, 4);
    let t = 8 * l.word_len();
    let mut exact = 0;
    let mut deterministic = true;
    for seed in 0..1000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let index = rng.gen::<u32>() as u64;
        let value = rng.gen_range(1..=l.size());
        let entries = [(index, value)].into_iter().collect();
        let tape = Tape::build(&entries, &l, t, seed, CollisionPolicy::default()).unwrap();
        if seed % 100 == 0 {
            let again = Tape::build(&entries, &l, t, seed, CollisionPolicy::default()).unwrap();
            deterministic &= again.cells() == tape.cells();
        }
        exact += (tape.query(index) == value) as u32;
    }
    Outcome {
        pass: exact >= 990 && deterministic,
        detail: format!("exact {exact}/1000 (need >= 990), deterministic={deterministic}"),
    }
}

/// Not a criterion: the same sweep at low noise, where the milestone floor
/// drops and the within-window tail is visible.
fn low_noise_profile() -> String {
    let l = layout(4, 8, 4);
    let m = l.step();
    let ch = BscChannel::new(0.005, 1).unwrap();
    let errors = simulate_errors(&l, &ch, 100_000);
    let rows = survival_rows(&errors, &[0, 1, m / 8, m / 4, m / 2, m, 3 * m]);
    rows.iter()
        .map(|r| format!("S({})={:.2e}", r.t, r.survival))
        .collect::<Vec<_>>()
        .join(" ")
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 unit increment", unit_increment),
        ("2 milestone spacing", milestone_spacing),
        ("3 noiseless round trip", noiseless_roundtrip),
        ("4 rollback exactness", rollback_exactness),
        (
            "5 sequential = brute-force staircase decode",
            staircase_vs_brute_force,
        ),
        ("6 empirical tail", empirical_tail),
        ("7 rate ordering", rate_ordering),
        ("8 incremental argmin equivalence", incremental_argmin),
        ("9 tape recovery", tape_recovery),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "[{}] criterion {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!("[INFO] (4,8,4) p=0.005 tail: {}", low_noise_profile());
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
