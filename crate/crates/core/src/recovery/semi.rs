//! Semi-isomorphic embeddings of a session into `(ω, <, f)`.

use serde::Serialize;
use thiserror::Error;

use crate::blocks::{decompose_prefix_partial, Block, BlockFunction, FnError};
use crate::structure::FiniteStructure;

/// A block of the snapshot `B_m`, located in the current session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MarkedBlock {
    /// Current session positions of the block's elements, in order.
    pub positions: Vec<usize>,
    pub shape: FiniteStructure,
}

/// The data a semi-embedding is searched against.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemiProblem {
    /// Number of elements in the session.
    pub len: usize,
    pub marked: Vec<MarkedBlock>,
    /// Positions `0..fixed_prefix` hold the copy of `A^{1,init}`, which is
    /// mapped identically.
    pub fixed_prefix: usize,
}

/// `ξ`, as the image of each session position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemiEmbedding {
    pub map: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemiViolation {
    #[error("map has {got} entries for {want} elements")]
    Length { got: usize, want: usize },
    #[error("order not respected at position {0}")]
    Order(usize),
    #[error("image {value} of position {position} exceeds the bound {bound}")]
    Range { position: usize, value: u64, bound: u64 },
    #[error("marked block {0} is not sent onto an isomorphic f-block")]
    Block(usize),
    #[error("position {0} of the fixed prefix is moved")]
    Normalization(usize),
    #[error(transparent)]
    Function(#[from] FnError),
}

/// The range bound `min(n, 2·len + 1)`.
pub fn semi_bound(problem: &SemiProblem, n: u64) -> u64 {
    n.min(2 * problem.len as u64 + 1)
}

fn occurrences(f: &BlockFunction, bound: u64) -> Result<Vec<Block>, FnError> {
    let (blocks, _) = decompose_prefix_partial(f, bound).map_err(|e| match e {
        crate::blocks::DecomposeFailure::NoMinimalClosure { position }
        | crate::blocks::DecomposeFailure::EscapesPrefix { position } => FnError::Undefined(position),
    })?;
    Ok(blocks)
}

fn contiguous(b: &MarkedBlock) -> bool {
    b.positions.windows(2).all(|w| w[1] == w[0] + 1) && b.positions.len() == b.shape.size()
}

/// Greedy leftmost placement. With `normalize`, the fixed prefix is mapped
/// identically (condition (∗)); without it, marked blocks in the prefix are
/// placed like any other.
fn search(problem: &SemiProblem, f: &BlockFunction, n: u64, normalize: bool) -> Result<Option<SemiEmbedding>, FnError> {
    let bound = semi_bound(problem, n);
    let blocks = occurrences(f, bound)?;
    let mut starts_at = vec![None; problem.len];
    for (i, b) in problem.marked.iter().enumerate() {
        if !contiguous(b) {
            return Ok(None);
        }
        if let Some(&p) = b.positions.first() {
            starts_at[p] = Some(i);
        }
    }
    let mut map = Vec::with_capacity(problem.len);
    let mut next = 0u64;
    let mut p = if normalize { problem.fixed_prefix } else { 0 };
    if normalize {
        map.extend(0..problem.fixed_prefix as u64);
        next = problem.fixed_prefix as u64;
        // The fixed prefix must itself be a sequence of the right blocks.
        for b in problem.marked.iter().filter(|b| b.positions[0] < problem.fixed_prefix) {
            let lo = b.positions[0] as u64;
            let ok = blocks.iter().any(|o| o.lo() == lo && o.shape == b.shape);
            if !ok || *b.positions.last().unwrap() >= problem.fixed_prefix {
                return Ok(None);
            }
        }
    }
    while p < problem.len {
        match starts_at[p] {
            Some(i) => {
                let b = &problem.marked[i];
                let Some(o) = blocks.iter().find(|o| o.lo() >= next && o.shape == b.shape) else {
                    return Ok(None);
                };
                map.extend(o.lo()..=o.hi());
                next = o.hi() + 1;
                p += b.positions.len();
            }
            None => {
                map.push(next);
                next += 1;
                p += 1;
            }
        }
    }
    if next > bound {
        return Ok(None);
    }
    Ok(Some(SemiEmbedding { map }))
}

/// A semi-embedding satisfying (∗), if one exists with range below
/// `min(n, 2·len + 1)`.
pub fn find_semi_embedding(problem: &SemiProblem, f: &BlockFunction, n: u64) -> Result<Option<SemiEmbedding>, FnError> {
    search(problem, f, n, true)
}

/// The same search without condition (∗).
pub fn find_semi_embedding_unnormalized(
    problem: &SemiProblem,
    f: &BlockFunction,
    n: u64,
) -> Result<Option<SemiEmbedding>, FnError> {
    search(problem, f, n, false)
}

/// Independent check of (i), (ii), the range bound, and, when `normalized`, (∗).
pub fn verify_semi_embedding(
    e: &SemiEmbedding,
    problem: &SemiProblem,
    f: &BlockFunction,
    n: u64,
    normalized: bool,
) -> Result<(), SemiViolation> {
    if e.map.len() != problem.len {
        return Err(SemiViolation::Length {
            got: e.map.len(),
            want: problem.len,
        });
    }
    let bound = semi_bound(problem, n);
    for (p, &v) in e.map.iter().enumerate() {
        if v >= bound {
            return Err(SemiViolation::Range {
                position: p,
                value: v,
                bound,
            });
        }
        if p > 0 && e.map[p - 1] >= v {
            return Err(SemiViolation::Order(p));
        }
        if normalized && p < problem.fixed_prefix && v != p as u64 {
            return Err(SemiViolation::Normalization(p));
        }
    }
    for (i, b) in problem.marked.iter().enumerate() {
        let imgs: Vec<u64> = b.positions.iter().map(|&p| e.map[p]).collect();
        let lo = imgs[0];
        let hi = lo + b.shape.size() as u64;
        if imgs.iter().enumerate().any(|(k, &v)| v != lo + k as u64) {
            return Err(SemiViolation::Block(i));
        }
        for (k, &v) in imgs.iter().enumerate() {
            if f.value(v)? != lo + b.shape.image(k) as u64 {
                return Err(SemiViolation::Block(i));
            }
        }
        // The image must be one of the blocks of f.
        let is_block = occurrences(f, bound.max(hi))?
            .iter()
            .any(|o| o.lo() == lo && o.hi() + 1 == hi);
        if !is_block {
            return Err(SemiViolation::Block(i));
        }
    }
    Ok(())
}
