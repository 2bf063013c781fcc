//! Order- and function-preserving embeddings of finite structures.

use std::collections::HashMap;

use crate::blocks::{decompose_prefix_partial, BlockFunction, DecomposeFailure, FnError};
use crate::structure::FiniteStructure;

/// A finite target `(0..len, <, g)` where `g` may leave the target (`None`).
pub(crate) struct Target<'a> {
    pub vals: &'a [Option<usize>],
}

struct Search<'a> {
    b: &'a [usize],
    // into[j]: earlier positions i < j with b[i] = j.
    into: Vec<Vec<usize>>,
    cut: Vec<bool>,
    target: &'a [Option<usize>],
    // pre[w]: target positions v with g(v) = w, ascending.
    pre: Vec<Vec<usize>>,
    memo: HashMap<(usize, usize), u64>,
    cap: u64,
}

impl Search<'_> {
    fn new<'a>(b: &'a FiniteStructure, target: &'a Target<'a>, cap: u64) -> Search<'a> {
        let k = b.size();
        let mut into = vec![Vec::new(); k];
        for (i, &v) in b.fvals().iter().enumerate() {
            if i < v && v < k {
                into[v].push(i);
            }
        }
        // cut[j]: no edge of b joins [0, j) and [j, k).
        let mut cut = vec![false; k + 1];
        let mut cross = vec![0i64; k + 2];
        for (i, &v) in b.fvals().iter().enumerate() {
            let (lo, hi) = (i.min(v), i.max(v));
            if lo < hi {
                cross[lo + 1] += 1;
                cross[hi.min(k) + 1] -= 1;
            }
        }
        let mut running = 0;
        for (j, c) in cut.iter_mut().enumerate() {
            running += cross[j];
            *c = running == 0;
        }
        let mut pre = vec![Vec::new(); target.vals.len()];
        for (v, g) in target.vals.iter().enumerate() {
            if let Some(w) = *g {
                pre[w].push(v);
            }
        }
        Search {
            b: b.fvals(),
            into,
            cut,
            target: target.vals,
            pre,
            memo: HashMap::new(),
            cap,
        }
    }

    fn fits(&self, j: usize, v: usize, iota: &[usize]) -> bool {
        let g = self.target[v];
        for &i in &self.into[j] {
            if self.target[iota[i]] != Some(v) {
                return false;
            }
        }
        let bj = self.b[j];
        if bj < j {
            g == Some(iota[bj])
        } else if bj == j {
            g == Some(v)
        } else {
            bj < self.b.len() && matches!(g, Some(w) if w > v)
        }
    }

    fn candidates(&self, j: usize, next: usize, iota: &[usize]) -> Vec<usize> {
        match self.into[j].first() {
            Some(&i) => match self.target[iota[i]] {
                Some(v) if v >= next => vec![v],
                _ => Vec::new(),
            },
            // Otherwise ι(j) must be a preimage of ι(b(j)) when b(j) ≤ j
            // is already placed (or is j itself).
            None if self.b[j] < j => {
                let pre = &self.pre[iota[self.b[j]]];
                pre[pre.partition_point(|&v| v < next)..].to_vec()
            }
            None if self.b[j] == j => (next..self.target.len()).filter(|&v| self.target[v] == Some(v)).collect(),
            None => (next..self.target.len()).filter(|&v| self.orbit_fits(j, v, iota)).collect(),
        }
    }

    /// Whether sending `j` to `v` is consistent along the forward orbit of
    /// `j`: the orbit of `v` under `g` must visit placed images exactly,
    /// stay on the same side of `v`, and close up where the orbit of `j` does.
    fn orbit_fits(&self, j: usize, v: usize, iota: &[usize]) -> bool {
        let mut pairs: Vec<(usize, usize)> = vec![(j, v)];
        let (mut o, mut t) = (j, v);
        loop {
            let o2 = self.b[o];
            let Some(t2) = self.target[t] else { return false };
            if let Some(&(_, seen)) = pairs.iter().find(|p| p.0 == o2) {
                return seen == t2;
            }
            if pairs.iter().any(|p| p.1 == t2) {
                return false;
            }
            let placed_ok = if o2 < j { iota[o2] == t2 } else { t2 > v };
            if !placed_ok {
                return false;
            }
            pairs.push((o2, t2));
            (o, t) = (o2, t2);
        }
    }

    /// Embeddings of `b[j..]` with `ι(j) ≥ next`, capped.
    fn count(&mut self, j: usize, next: usize, iota: &mut Vec<usize>) -> u64 {
        if j == self.b.len() {
            return 1;
        }
        let memoize = j > 0 && self.cut[j];
        if memoize {
            if let Some(&c) = self.memo.get(&(j, next)) {
                return c;
            }
        }
        let mut total = 0u64;
        for v in self.candidates(j, next, iota) {
            if !self.fits(j, v, iota) {
                continue;
            }
            iota.push(v);
            total = total.saturating_add(self.count(j + 1, v + 1, iota)).min(self.cap);
            iota.pop();
            if total >= self.cap {
                break;
            }
        }
        if memoize {
            self.memo.insert((j, next), total);
        }
        total
    }

    fn first(&mut self, j: usize, next: usize, iota: &mut Vec<usize>) -> bool {
        if j == self.b.len() {
            return true;
        }
        let memoize = j > 0 && self.cut[j];
        if memoize && self.memo.contains_key(&(j, next)) {
            return false;
        }
        for v in self.candidates(j, next, iota) {
            if !self.fits(j, v, iota) {
                continue;
            }
            iota.push(v);
            if self.first(j + 1, v + 1, iota) {
                return true;
            }
            iota.pop();
        }
        if memoize {
            self.memo.insert((j, next), 0);
        }
        false
    }
}

/// Number of embeddings of `b` into `target`, stopping at `cap`.
pub(crate) fn count_into(b: &FiniteStructure, target: &Target<'_>, cap: u64) -> u64 {
    if b.is_empty() {
        return 1;
    }
    Search::new(b, target, cap).count(0, 0, &mut Vec::new())
}

/// The leftmost-first embedding of `b` into `target`, if any.
pub(crate) fn first_into(b: &FiniteStructure, target: &Target<'_>) -> Option<Vec<usize>> {
    let mut iota = Vec::new();
    Search::new(b, target, 1).first(0, 0, &mut iota).then_some(iota)
}

fn prefix_target(f: &BlockFunction, n: u64) -> Result<Vec<Option<usize>>, FnError> {
    Ok(f.prefix(n)?
        .into_iter()
        .map(|v| (v < n).then_some(v as usize))
        .collect())
}

/// Number of embeddings of `b` into `(ω, <, f)↾n` preserving order and `f`.
pub fn count_embeddings(b: &FiniteStructure, f: &BlockFunction, n: u64) -> Result<u64, FnError> {
    count_embeddings_capped(b, f, n, u64::MAX)
}

/// [`count_embeddings`], stopping once `cap` embeddings are found.
pub fn count_embeddings_capped(b: &FiniteStructure, f: &BlockFunction, n: u64, cap: u64) -> Result<u64, FnError> {
    let vals = prefix_target(f, n)?;
    Ok(count_into(b, &Target { vals: &vals }, cap))
}

/// A finite chain of growing initial segments `B_0 ⊂ B_1 ⊂ …` of `(ω, <, f)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SegmentSequence {
    segments: Vec<FiniteStructure>,
}

impl SegmentSequence {
    /// Panics unless sizes strictly increase and each segment extends the last.
    pub fn new(segments: Vec<FiniteStructure>) -> Self {
        for w in segments.windows(2) {
            assert!(w[0].size() < w[1].size(), "segment sizes must increase");
            assert_eq!(w[0].fvals(), &w[1].fvals()[..w[0].size()], "segments must be prefixes");
        }
        SegmentSequence { segments }
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn get(&self, j: usize) -> Option<&FiniteStructure> {
        self.segments.get(j)
    }

    pub fn iter(&self) -> impl Iterator<Item = &FiniteStructure> {
        self.segments.iter()
    }
}

/// The first `count` closed initial segments `[0, c)`, `2c ≤ n`, that embed
/// into `(ω, <, f)↾n` exactly once.
pub fn unique_segments(f: &BlockFunction, count: usize, n: u64) -> Result<Option<SegmentSequence>, FnError> {
    if count == 0 {
        return Ok(Some(SegmentSequence::default()));
    }
    let vals = prefix_target(f, n)?;
    let (blocks, _) = decompose_prefix_partial(f, n).map_err(|e| match e {
        DecomposeFailure::NoMinimalClosure { position } | DecomposeFailure::EscapesPrefix { position } => {
            FnError::Undefined(position)
        }
    })?;
    let target = Target { vals: &vals };
    let mut out = Vec::new();
    for b in blocks {
        let c = b.hi() + 1;
        if 2 * c > n {
            break;
        }
        let seg = FiniteStructure::new(vals[..c as usize].iter().map(|v| v.expect("closed segment")).collect());
        if count_into(&seg, &target, 2) == 1 {
            out.push(seg);
            if out.len() == count {
                return Ok(Some(SegmentSequence::new(out)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::BlockSpec;

    fn increasing_cycles(max: usize) -> BlockFunction {
        let mut spec = BlockSpec::new();
        for l in 1..=max {
            spec.push_shape(FiniteStructure::cycle(l), 1);
        }
        BlockFunction::from_spec(spec)
    }

    #[test]
    fn full_prefix_embeds_once() {
        let f = BlockFunction::from_table(vec![0, 2, 1, 4, 5, 3]);
        let b = FiniteStructure::new(vec![0, 2, 1, 4, 5, 3]);
        assert_eq!(count_embeddings(&b, &f, 6), Ok(1));
    }

    #[test]
    fn fixed_point_into_identity() {
        let b = FiniteStructure::new(vec![0]);
        assert_eq!(count_embeddings(&b, &BlockFunction::identity(), 10), Ok(10));
        // Brute force: choose 3 of 10 points.
        let b3 = FiniteStructure::new(vec![0, 1, 2]);
        assert_eq!(count_embeddings(&b3, &BlockFunction::identity(), 10), Ok(120));
    }

    #[test]
    fn two_three_cycles() {
        let spec = BlockSpec::parse("type a fvals=0\ntype c fvals=1,2,0\nemit a x2\nemit c x1\nemit a x1\nemit c x1\nemit a x3").unwrap();
        let f = BlockFunction::from_spec(spec);
        assert_eq!(count_embeddings(&FiniteStructure::cycle(3), &f, 12), Ok(2));
    }

    #[test]
    fn cycle_embeddings_respect_rotation_order() {
        // The 3-cycle 0→2→1→0 is a different ordered structure.
        let f = BlockFunction::from_table(vec![1, 2, 0]);
        assert_eq!(count_embeddings(&FiniteStructure::new(vec![2, 0, 1]), &f, 3), Ok(0));
    }

    #[test]
    fn segments_for_increasing_cycles() {
        let f = increasing_cycles(12);
        let segs = unique_segments(&f, 3, 64).unwrap().unwrap();
        let sizes: Vec<usize> = segs.iter().map(|s| s.size()).collect();
        assert_eq!(sizes, vec![1, 3, 6]);
        for s in segs.iter() {
            assert_eq!(count_embeddings(s, &f, 64), Ok(1));
        }
    }

    #[test]
    fn identity_has_no_unique_segments() {
        assert_eq!(unique_segments(&BlockFunction::identity(), 1, 64), Ok(None));
        assert_eq!(unique_segments(&BlockFunction::identity(), 0, 64), Ok(Some(SegmentSequence::default())));
    }

    #[test]
    fn first_embedding_is_leftmost() {
        let vals = vec![Some(0), Some(2), Some(1), Some(3), Some(5), Some(4)];
        let t = Target { vals: &vals };
        assert_eq!(first_into(&FiniteStructure::cycle(2), &t), Some(vec![1, 2]));
    }
}
