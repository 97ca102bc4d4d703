use std::collections::HashSet;

use proptest::prelude::*;

use coded_gray::channel::BscChannel;
use coded_gray::codes::StaircaseCode;
use coded_gray::rgc::{BackupSource, Segment};
use coded_gray::scheme::{build_scheme, MilestonePath};
use coded_gray::{BitWord, CodeLayout, CodeParams, RobustGrayScheme, SchemeKind};

fn layout(kb: usize, nb: usize, s: usize) -> CodeLayout {
    CodeLayout::new(CodeParams::new(kb, nb, s).staircase().unwrap()).unwrap()
}

fn all_schemes(kb: usize, nb: usize, s: usize) -> Vec<Box<dyn RobustGrayScheme>> {
    let code = CodeParams::new(kb, nb, s).staircase().unwrap();
    SchemeKind::ALL
        .iter()
        .map(|&k| build_scheme(k, code.clone()).unwrap())
        .collect()
}

#[test]
fn encodings_are_injective() {
    for s in all_schemes(2, 4, 2) {
        let words: HashSet<BitWord> = (1..=s.size()).map(|x| s.encode(x).unwrap()).collect();
        assert_eq!(words.len() as u64, s.size(), "{}", s.kind());
    }
}

#[test]
fn selected_backup_belongs_to_the_current_transition() {
    let l = layout(2, 4, 2);
    for x in 1..l.size() {
        let j = 1 + (x - 1) / l.step();
        let sel = l.select_backup(&l.encode(x).unwrap()).unwrap();
        let here = l.milestone(j).unwrap();
        let next = l.milestone(j + 1).unwrap();
        let pair = (sel.rho, sel.beta.clone());
        assert!(
            pair == (here.rho, here.beta.clone()) || pair == (next.rho, next.beta.clone()),
            "x={x}"
        );
        if sel.source == BackupSource::First {
            assert_eq!(pair, (next.rho, next.beta));
        }
    }
}

#[test]
fn rollback_during_codeword_phase_wide() {
    let l = layout(4, 8, 4);
    let c = l.segment(Segment::Codeword);
    for j in [1u64, 2, 3, 8, 255, 4096, 65535] {
        let m = l.milestone(j).unwrap();
        for r in 0..=8 {
            let w = l.encode(l.milestone_x(j) + r).unwrap();
            let rolled = l.roll(&w.slice(c.start, c.len()), m.rho, &m.beta).unwrap();
            assert_eq!(rolled, m.codeword);
        }
    }
}

fn flip_one_per_block(code: &StaircaseCode, word: &mut BitWord, choice: &[usize]) {
    let nb = code.inner().len();
    for (b, &e) in choice.iter().enumerate() {
        if e > 0 {
            word.flip(b * nb + e - 1);
        }
    }
}

#[test]
fn staircase_corrects_within_radius_in_every_block() {
    // dmin = 3 here, so one flip per decoded block is within radius; the last
    // block is never read and may be arbitrarily corrupted
    let code = CodeParams::new(4, 8, 2).staircase().unwrap();
    assert!(code.inner().correction_radius() >= 1);
    let k = code.dim();
    for msg in (0..1u64 << k).step_by(7) {
        let m = BitWord::from_u64_lsb(msg, k);
        let cw = code.encode(&m).unwrap();
        for a in 0..=8 {
            for b in 0..=8 {
                let mut w = cw.clone();
                flip_one_per_block(&code, &mut w, &[a, b]);
                for p in 16..24 {
                    if (p + a + b) % 3 == 0 {
                        w.flip(p);
                    }
                }
                assert_eq!(code.decode(&w).unwrap(), m);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn unit_increment_at_scale(x in 1u64..3_669_961) {
        let l = layout(4, 8, 4);
        prop_assume!(x < l.size());
        prop_assert_eq!(l.encode(x).unwrap().distance(&l.encode(x + 1).unwrap()), 1);
    }

    #[test]
    fn baselines_unit_increment_and_roundtrip(seed in 0u64..1000) {
        for s in all_schemes(4, 8, 3) {
            let x = 1 + seed * 104_729 % (s.size() - 1);
            let w = s.encode(x).unwrap();
            prop_assert_eq!(w.distance(&s.encode(x + 1).unwrap()), 1);
            prop_assert_eq!(s.decode(&w).unwrap(), x);
        }
    }

    #[test]
    fn decode_is_total(bits in proptest::collection::vec(any::<bool>(), 112)) {
        let l = layout(4, 8, 4);
        prop_assert_eq!(l.len(), 112);
        let x = l.decode(&BitWord::from_bools(&bits)).unwrap();
        prop_assert!((1..=l.size()).contains(&x));
    }

    #[test]
    fn decode_is_deterministic_under_noise(x in 1u64..421, i in 0u64..1000) {
        let l = layout(2, 4, 2);
        let ch = BscChannel::new(0.08, 5).unwrap();
        let w = ch.transmit(&l.encode(x).unwrap(), i);
        prop_assert_eq!(l.decode(&w).unwrap(), l.decode(&w).unwrap());
    }

    #[test]
    fn milestone_segments_follow_parity(j in 1u64..=65536) {
        let l = layout(4, 8, 4);
        let m = l.milestone(j).unwrap();
        let part = |seg| {
            let r = l.segment(seg);
            m.word.slice(r.start, r.len())
        };
        let buf = BitWord::filled(l.buf_len(), m.is_odd());
        prop_assert_eq!(part(Segment::Buffer1), buf.clone());
        prop_assert_eq!(part(Segment::Buffer3), buf);
        prop_assert_eq!(part(Segment::Backup1), m.backup.clone());
        let second = if m.is_odd() { m.backup.complement() } else { m.backup.clone() };
        prop_assert_eq!(part(Segment::Backup2), second);
    }
}

#[test]
fn noiseless_roundtrip_matches_milestone_x() {
    let l = layout(4, 8, 4);
    for j in [1u64, 2, 100, 65535, 65536] {
        let m = l.milestone(j).unwrap();
        assert_eq!(l.decode(&m.word).unwrap(), l.milestone_x(j));
    }
    assert_eq!(l.path_size(), l.size());
}
