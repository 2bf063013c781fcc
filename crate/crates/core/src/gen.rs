//! Seeded generators for block functions, copy schedules, notations and
//! Δ₂ approximations. Every generator is a pure function of its seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blocks::{is_block_shape, BlockSpec};
use crate::copies::{Delta2Approx, ScheduleOp};
use crate::structure::FiniteStructure;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random block shape on `size` elements.
pub fn random_block_shape(rng: &mut impl Rng, size: usize) -> FiniteStructure {
    let mut fvals: Vec<usize> = (0..size).map(|_| rng.gen_range(0..size)).collect();
    for _ in 0..4 * size {
        let shape = FiniteStructure::new(fvals.clone());
        if is_block_shape(&shape) {
            return shape;
        }
        // Bridge the first cut with an edge from just left of it.
        let c = first_cut(&fvals).expect("not a block, so some inner cut");
        fvals[c - 1] = rng.gen_range(c..size);
    }
    FiniteStructure::new(random_cycle_order(rng, size))
}

fn first_cut(fvals: &[usize]) -> Option<usize> {
    (1..fvals.len()).find(|&c| fvals[..c].iter().all(|&v| v < c) && fvals[c..].iter().all(|&v| v >= c))
}

/// A single cycle through all `size` elements in random order.
fn random_cycle_order(rng: &mut impl Rng, size: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..size).collect();
    order.shuffle(rng);
    let mut fvals = vec![0; size];
    for i in 0..size {
        fvals[order[i]] = order[(i + 1) % size];
    }
    fvals
}

/// `blocks` random blocks of size `1..=max_block`, drawn from a pool of a
/// few shapes so that types repeat.
pub fn random_block_spec(seed: u64, max_block: usize, blocks: usize) -> BlockSpec {
    let mut r = rng(seed);
    let pool: Vec<FiniteStructure> = (0..r.gen_range(2..=6))
        .map(|_| {
            let size = r.gen_range(1..=max_block);
            random_block_shape(&mut r, size)
        })
        .collect();
    let mut spec = BlockSpec::new();
    for _ in 0..blocks {
        let shape = pool.choose(&mut r).expect("nonempty pool").clone();
        spec.push_shape(shape, 1);
    }
    spec
}

/// Single-cycle blocks of strictly increasing sizes, starting at a size in
/// `1..=3` and growing by `1..=3` each time; each cycle visits its elements
/// in random order. Every closed initial segment embeds exactly once.
pub fn increasing_cycles_spec(seed: u64, count: usize) -> BlockSpec {
    let mut r = rng(seed);
    let mut size = r.gen_range(1..=3);
    let mut spec = BlockSpec::new();
    for _ in 0..count {
        let shape = FiniteStructure::new(random_cycle_order(&mut r, size));
        spec.push_shape(shape, 1);
        size += r.gen_range(1..=3);
    }
    spec
}

/// `n` schedule ops, each an insertion with probability `p_insert` at a
/// position allowed by the delay bound.
pub fn random_schedule(seed: u64, n: usize, p_insert: f64) -> Vec<ScheduleOp> {
    let mut r = rng(seed);
    let mut order: Vec<u64> = Vec::with_capacity(n);
    let mut ops = Vec::with_capacity(n);
    for s in 0..n as u64 {
        let mut allowed = Vec::new();
        let mut suffix_min = u64::MAX;
        for k in (0..order.len()).rev() {
            suffix_min = suffix_min.min(order[k]);
            if s < 2 * suffix_min + 2 {
                allowed.push(k);
            }
        }
        let op = if !allowed.is_empty() && r.gen_bool(p_insert) {
            let k = *allowed.choose(&mut r).expect("nonempty");
            order.insert(k, s);
            ScheduleOp::InsertAt(k)
        } else {
            order.push(s);
            ScheduleOp::Append
        };
        ops.push(op);
    }
    ops
}

/// A permutation of `0..n` that shuffles consecutive blocks of random size
/// `1..=max_block` internally.
pub fn block_scramble(seed: u64, n: usize, max_block: usize) -> Vec<u64> {
    let mut r = rng(seed);
    let mut out: Vec<u64> = Vec::with_capacity(n);
    while out.len() < n {
        let lo = out.len();
        let hi = (lo + r.gen_range(1..=max_block)).min(n);
        let mut chunk: Vec<u64> = (lo as u64..hi as u64).collect();
        chunk.shuffle(&mut r);
        out.extend(chunk);
    }
    out
}

/// A Δ₂ approximation given by an initial guess and flip stages per index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptedDelta2 {
    pub initial: Vec<bool>,
    pub flips: Vec<Vec<u64>>,
}

impl ScriptedDelta2 {
    /// `indices` indices, each flipping at most `max_flips` times at
    /// distinct stages below `horizon`.
    pub fn random(seed: u64, indices: usize, max_flips: usize, horizon: u64) -> Self {
        let mut r = rng(seed);
        let initial = (0..indices).map(|_| r.gen_bool(0.5)).collect();
        let flips = (0..indices)
            .map(|_| {
                let k = r.gen_range(0..=max_flips);
                let mut stages: Vec<u64> = (1..horizon).collect::<Vec<_>>().choose_multiple(&mut r, k).copied().collect();
                stages.sort_unstable();
                stages
            })
            .collect();
        ScriptedDelta2 { initial, flips }
    }

    /// `X(e)` in the limit.
    pub fn limit(&self, e: u64) -> bool {
        let e = e as usize;
        self.initial.get(e).copied().unwrap_or(false) ^ (self.flips.get(e).map_or(0, Vec::len) % 2 == 1)
    }
}

impl Delta2Approx for ScriptedDelta2 {
    fn approx(&self, e: u64, s: u64) -> bool {
        let i = e as usize;
        let flipped = self.flips.get(i).map_or(0, |f| f.iter().filter(|&&t| t <= s).count());
        self.initial.get(i).copied().unwrap_or(false) ^ (flipped % 2 == 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copies::schedule_copy_ops;
    use crate::blocks::BlockFunction;

    #[test]
    fn shapes_are_blocks() {
        let mut r = rng(7);
        for size in 1..=12 {
            for _ in 0..20 {
                assert!(is_block_shape(&random_block_shape(&mut r, size)));
            }
        }
    }

    #[test]
    fn generators_are_seed_determined() {
        assert_eq!(random_block_spec(3, 12, 40), random_block_spec(3, 12, 40));
        assert_eq!(random_schedule(3, 50, 0.3), random_schedule(3, 50, 0.3));
        assert_ne!(block_scramble(1, 64, 5), block_scramble(2, 64, 5));
    }

    #[test]
    fn schedules_respect_the_delay_bound() {
        for seed in 0..20 {
            let ops = random_schedule(seed, 80, 0.4);
            assert!(schedule_copy_ops(BlockFunction::identity(), &ops).is_ok());
        }
    }

    #[test]
    fn scramble_is_a_permutation() {
        let mut p = block_scramble(9, 100, 6);
        p.sort_unstable();
        assert_eq!(p, (0..100).collect::<Vec<_>>());
    }

    #[test]
    fn scripted_limit_matches_last_stage() {
        let x = ScriptedDelta2::random(5, 32, 3, 50);
        for e in 0..32 {
            assert_eq!(x.approx(e, 50), x.limit(e));
        }
    }
}
