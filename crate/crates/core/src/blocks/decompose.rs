//! Brute-force analysis of `f` on a finite prefix `[0, n)`.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use super::{Block, BlockFunction, FnError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum DecomposeFailure {
    #[error("f({position}) escapes the prefix")]
    EscapesPrefix { position: u64 },
    #[error("no closure for position {position}: f is not evaluable there")]
    NoMinimalClosure { position: u64 },
}

fn values(f: &BlockFunction, n: u64) -> Result<Vec<u64>, DecomposeFailure> {
    (0..n)
        .map(|x| f.value(x).map_err(|_| DecomposeFailure::NoMinimalClosure { position: x }))
        .collect()
}

/// Positions `c ≤ n` with no edge of `f↾n` crossing between `[0,c)` and `[c,n)`.
fn cuts(vals: &[u64]) -> Vec<usize> {
    let n = vals.len();
    let mut suffix_min = vec![u64::MAX; n + 1];
    for x in (0..n).rev() {
        suffix_min[x] = suffix_min[x + 1].min(vals[x]);
    }
    let mut out = vec![0];
    let mut reach = 0u64;
    for c in 1..=n {
        reach = reach.max(vals[c - 1]);
        if reach < c as u64 && suffix_min[c] >= c as u64 {
            out.push(c);
        }
    }
    out
}

fn blocks_between(vals: &[u64], cuts: &[usize]) -> Vec<Block> {
    cuts.windows(2)
        .map(|w| Block::from_values(w[0] as u64, &vals[w[0]..w[1]]))
        .collect()
}

/// Splits `[0, n)` into consecutive minimal f-closed intervals.
pub fn decompose_prefix(f: &BlockFunction, n: u64) -> Result<Vec<Block>, DecomposeFailure> {
    let vals = values(f, n)?;
    if let Some(x) = vals.iter().position(|&v| v >= n) {
        return Err(DecomposeFailure::EscapesPrefix { position: x as u64 });
    }
    Ok(blocks_between(&vals, &cuts(&vals)))
}

/// The blocks lying wholly inside `[0, n)` and the start of the unfinished
/// tail, if any.
pub fn decompose_prefix_partial(f: &BlockFunction, n: u64) -> Result<(Vec<Block>, Option<u64>), DecomposeFailure> {
    let vals = values(f, n)?;
    let cs = cuts(&vals);
    let last = *cs.last().expect("0 is a cut");
    let tail = (last < vals.len()).then_some(last as u64);
    Ok((blocks_between(&vals, &cs), tail))
}

/// `card{y < n : f(y) = x}`.
pub fn cp_bounded(f: &BlockFunction, x: u64, n: u64) -> Result<u64, FnError> {
    let mut count = 0;
    for y in 0..n {
        if f.value(y)? == x {
            count += 1;
        }
    }
    Ok(count)
}

/// Lengths `c ≤ n` for which `[0, c)` is closed under `f`.
pub fn closed_initial_segments(vals: &[u64]) -> Vec<u64> {
    let mut out = Vec::new();
    let mut reach = 0u64;
    for (c, &v) in vals.iter().enumerate() {
        reach = reach.max(v);
        if reach <= c as u64 {
            out.push(c as u64 + 1);
        }
    }
    out
}

/// Prefix verdicts. A property holds on the prefix when its exception count
/// is at most `⌊n/4⌋`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub n: u64,
    /// Most frequent value, least one on ties.
    pub constant_value: u64,
    pub constant_exceptions: u64,
    pub almost_constant: bool,
    pub identity_exceptions: u64,
    pub almost_identity: bool,
    pub block_on_prefix: bool,
    pub block_count: usize,
    /// Lengths of the closed initial segments.
    pub closed_segments: Vec<u64>,
    /// More than one closed initial segment.
    pub quasi_block_on_prefix: bool,
}

pub fn classify_prefix(f: &BlockFunction, n: u64) -> Result<Classification, FnError> {
    let vals = f.prefix(n)?;
    let threshold = n / 4;
    let mut freq: HashMap<u64, u64> = HashMap::new();
    for &v in &vals {
        *freq.entry(v).or_default() += 1;
    }
    let (constant_value, hits) = freq
        .iter()
        .map(|(&v, &c)| (v, c))
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .unwrap_or((0, 0));
    let constant_exceptions = n - hits;
    let identity_exceptions = vals.iter().enumerate().filter(|&(x, &v)| v != x as u64).count() as u64;
    let decomposition = decompose_prefix(f, n).ok();
    let closed_segments = closed_initial_segments(&vals);
    Ok(Classification {
        n,
        constant_value,
        constant_exceptions,
        almost_constant: constant_exceptions <= threshold,
        identity_exceptions,
        almost_identity: identity_exceptions <= threshold,
        block_on_prefix: decomposition.is_some(),
        block_count: decomposition.map_or(0, |d| d.len()),
        quasi_block_on_prefix: closed_segments.len() > 1,
        closed_segments,
    })
}
