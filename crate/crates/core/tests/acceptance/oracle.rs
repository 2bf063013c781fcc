//! Brute-force reference computations, written from the definitions and
//! sharing no code with the library.

use spectra::copies::ComputableCopy;
use spectra::copies::CopyOracle;

/// Blocks of a value table, as inclusive `(lo, hi)` pairs: the intervals
/// between consecutive cuts, where `c` is a cut iff `x < c ⇔ f(x) < c`
/// for every `x` in the table. Intervals after the last cut are dropped.
pub fn blocks_brute(vals: &[u64]) -> Vec<(u64, u64)> {
    let n = vals.len() as u64;
    let mut cuts = vec![0u64];
    for c in 1..=n {
        if vals.iter().enumerate().all(|(x, &v)| ((x as u64) < c) == (v < c)) {
            cuts.push(c);
        }
    }
    intervals(&cuts)
}

/// [`blocks_brute`] in linear time: `c` is a cut iff the values before it
/// stay below `c` and the values from it on stay at or above `c`.
pub fn blocks(vals: &[u64]) -> Vec<(u64, u64)> {
    let n = vals.len();
    let mut below = vec![true; n + 1];
    let mut max = 0u64;
    for c in 1..=n {
        max = max.max(vals[c - 1]);
        below[c] = max < c as u64;
    }
    let mut cuts = Vec::new();
    let mut min = u64::MAX;
    for c in (0..=n).rev() {
        if below[c] && min >= c as u64 {
            cuts.push(c as u64);
        }
        if c > 0 {
            min = min.min(vals[c - 1]);
        }
    }
    cuts.reverse();
    intervals(&cuts)
}

fn intervals(cuts: &[u64]) -> Vec<(u64, u64)> {
    cuts.windows(2).map(|w| (w[0], w[1] - 1)).collect()
}

/// `card(f⁻¹(w))` counted over the whole table.
pub fn preimage_count(vals: &[u64], w: u64) -> u64 {
    vals.iter().filter(|&&v| v == w).count() as u64
}

/// `f` restricted to `[lo, hi]`, shifted to start at 0.
pub fn shape(vals: &[u64], lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).map(|x| vals[x as usize] - lo).collect()
}

/// Number of `<_A`-predecessors of `x`, counted over every natural that
/// could precede any of the first `window` elements.
pub fn predecessor_count(copy: &ComputableCopy, x: u64, window: u64) -> u64 {
    let top = copy.placed().iter().copied().max().unwrap_or(0) + window + 1;
    (0..=top.max(x)).filter(|&y| y != x && copy.less(y, x)).count() as u64
}

/// All strictly increasing maps `[0, len) → [0, bound)` accepted by `ok`,
/// which sees each partial map and may prune it.
pub fn increasing_maps(len: usize, bound: u64, ok: &mut dyn FnMut(&[u64], bool) -> bool) -> u64 {
    fn go(len: usize, bound: u64, map: &mut Vec<u64>, ok: &mut dyn FnMut(&[u64], bool) -> bool) -> u64 {
        if map.len() == len {
            return u64::from(ok(map, true));
        }
        let start = map.last().map_or(0, |&v| v + 1);
        let room = (len - map.len()) as u64;
        let mut total = 0;
        let mut v = start;
        while v + room <= bound {
            map.push(v);
            if ok(map, false) {
                total += go(len, bound, map, ok);
            }
            map.pop();
            v += 1;
        }
        total
    }
    go(len, bound, &mut Vec::new(), ok)
}

/// Disjoint f-closed intervals at or after `from` on which `f` has exactly
/// the given shape, scanned left to right; stops once `want` are found.
pub fn closed_occurrences(vals: &[u64], shape: &[u64], from: u64, want: usize) -> usize {
    let len = shape.len();
    let mut found = 0;
    let mut p = from as usize;
    while found < want && p + len <= vals.len() {
        if (0..len).all(|k| vals[p + k] == (p as u64) + shape[k]) {
            found += 1;
            p += len;
        } else {
            p += 1;
        }
    }
    found
}
