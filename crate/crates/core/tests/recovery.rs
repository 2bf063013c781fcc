use proptest::prelude::*;
use spectra::blocks::{BlockFunction, BlockSpec};
use spectra::copies::{schedule_copy_ops, standard_copy, ComputableCopy, CopyOracle};
use spectra::gen::{increasing_cycles_spec, random_block_shape, random_schedule, rng};
use spectra::recovery::{
    count_embeddings, recover_successor, recover_successor_traced, reduce_f_to_succ, unique_segments, RecoveryEvent,
};
use spectra::structure::FiniteStructure;

/// Every strictly increasing map of `b` into `vals`, checked pointwise.
fn brute_embeddings(b: &[usize], vals: &[u64]) -> u64 {
    fn go(b: &[usize], vals: &[u64], map: &mut Vec<usize>) -> u64 {
        if map.len() == b.len() {
            let ok = (0..b.len()).all(|j| vals[map[j]] == map[b[j]] as u64);
            return u64::from(ok);
        }
        let start = map.last().map_or(0, |&v| v + 1);
        let mut total = 0;
        for v in start..vals.len() {
            map.push(v);
            total += go(b, vals, map);
            map.pop();
        }
        total
    }
    go(b, vals, &mut Vec::new())
}

fn small_function(seed: u64, blocks: usize) -> BlockFunction {
    let mut r = rng(seed);
    let mut spec = BlockSpec::new();
    for _ in 0..blocks {
        let size = rand::Rng::gen_range(&mut r, 1..=4);
        spec.push_shape(random_block_shape(&mut r, size), 1);
    }
    spec.set_repeat(true);
    BlockFunction::from_spec(spec)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn embedding_count_matches_brute_force(seed in 0u64..10_000, size in 1usize..5, n in 4u64..14) {
        let f = small_function(seed, 6);
        let b = random_block_shape(&mut rng(seed ^ 0x5eed), size);
        let vals = f.prefix(n).unwrap();
        prop_assert_eq!(count_embeddings(&b, &f, n).unwrap(), brute_embeddings(b.fvals(), &vals));
    }

    #[test]
    fn prefixes_embed_at_least_once(seed in 0u64..10_000, n in 4u64..40) {
        let f = small_function(seed, 12);
        let vals = f.prefix(n).unwrap();
        for c in 1..=n as usize {
            if vals[..c].iter().all(|&v| v < c as u64) {
                let b = FiniteStructure::new(vals[..c].iter().map(|&v| v as usize).collect());
                prop_assert!(count_embeddings(&b, &f, n).unwrap() >= 1);
            }
        }
    }
}

/// Element-level ground truth on the first positions of the copy.
fn check_copy(copy: &ComputableCopy, f: &BlockFunction, count: usize) {
    let segs = unique_segments(f, count, 256).unwrap().expect("unique segments");
    for p in 0..30 {
        let x = copy.element_at(p);
        assert_eq!(recover_successor(copy, &segs, x, 1024), Ok(copy.succ(x)), "position {p}");
    }
}

#[test]
fn recovery_on_scheduled_copies() {
    for seed in 0..6 {
        let f = BlockFunction::from_spec(increasing_cycles_spec(seed, 30));
        let copy = schedule_copy_ops(f.clone(), &random_schedule(seed, 120, 0.35)).unwrap();
        check_copy(&copy, &f, 6);
    }
}

#[test]
fn trace_confirms_before_answering() {
    let f = BlockFunction::from_spec(increasing_cycles_spec(3, 20));
    let segs = unique_segments(&f, 4, 128).unwrap().unwrap();
    let copy = standard_copy(f);
    let mut events = Vec::new();
    let got = recover_successor_traced(&copy, &segs, 2, 512, &mut |e| events.push(e)).unwrap();
    assert_eq!(got, 3);
    let answer = events.iter().position(|e| matches!(e, RecoveryEvent::Answer { .. })).unwrap();
    assert_eq!(answer, events.len() - 1);
    assert!(events[..answer].iter().any(|e| matches!(e, RecoveryEvent::SegmentConfirmed { .. })));
}

#[test]
fn easy_direction_through_successor() {
    let f = BlockFunction::from_spec(increasing_cycles_spec(5, 12));
    let copy = schedule_copy_ops(f.clone(), &random_schedule(5, 60, 0.3)).unwrap();
    let succ = |e: u64| copy.succ(e);
    for p in 0..40 {
        let x = copy.element_at(p);
        assert_eq!(reduce_f_to_succ(&succ, copy.least(), &f, x, 10_000).ok(), copy.fimg(x).ok());
    }
}
