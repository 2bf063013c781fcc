//! Blocks of `f` by position, and the Step-2 choice of `C̃ < D̃`.

use serde::Serialize;

use super::TreeError;
use crate::blocks::{decompose_prefix_partial, Block, BlockFunction, DecomposeFailure};

const MAX_HORIZON: u64 = 1 << 22;
/// How many candidate pairs Step 2 tries before giving up.
const PAIR_SEARCH: usize = 4096;

/// Which item-(ii) condition picked the markers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MarkerCase {
    /// Some `v > ũ` in `D̃` has `f(v) = ũ`; `x` is the copy of `v − 1`,
    /// `y` the last element of `C`.
    LeftmostPreimage,
    /// `f(ũ) > ũ`; `x` is the last element of `C`, `y` the copy of
    /// `f(ũ) − 1`. Not covered by the construction as published.
    LeftmostImage,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Choice {
    pub c: Block,
    pub d: Block,
    pub case: MarkerCase,
    pub x_pos: u64,
    pub y_pos: u64,
}

#[derive(Debug, Clone)]
pub(crate) struct BlockCache {
    f: BlockFunction,
    horizon: u64,
    blocks: Vec<Block>,
}

impl BlockCache {
    pub fn new(f: BlockFunction) -> Self {
        BlockCache {
            f,
            horizon: 0,
            blocks: Vec::new(),
        }
    }

    pub fn function(&self) -> &BlockFunction {
        &self.f
    }

    fn grow(&mut self) -> Result<(), TreeError> {
        let next = (self.horizon * 2).max(64);
        if next > MAX_HORIZON {
            return Err(TreeError::Precondition(format!("no block boundary below {MAX_HORIZON}")));
        }
        let (blocks, _) = decompose_prefix_partial(&self.f, next).map_err(|e| match e {
            DecomposeFailure::EscapesPrefix { position } | DecomposeFailure::NoMinimalClosure { position } => {
                TreeError::Precondition(format!("f does not decompose into blocks near {position}"))
            }
        })?;
        self.horizon = next;
        self.blocks = blocks;
        Ok(())
    }

    /// The block containing position `p`.
    pub fn containing(&mut self, p: u64) -> Result<Block, TreeError> {
        while self.blocks.last().is_none_or(|b| b.hi() < p) {
            self.grow()?;
        }
        let i = self.blocks.partition_point(|b| b.hi() < p);
        Ok(self.blocks[i].clone())
    }

    /// Blocks lying wholly inside `[0, n)`.
    pub fn within(&mut self, n: u64) -> Result<Vec<Block>, TreeError> {
        if n > 0 {
            self.containing(n - 1)?;
        }
        Ok(self.blocks.iter().take_while(|b| b.hi() < n).cloned().collect())
    }

    /// The first adjacent pair `C̃ < D̃` with `C̃` starting at or after the
    /// cut `from` and `D̃` carrying a marker pair.
    pub fn choose(&mut self, from: u64, case_a: bool) -> Result<Choice, TreeError> {
        let mut c = self.containing(from)?;
        for _ in 0..PAIR_SEARCH {
            let d = self.containing(c.hi() + 1)?;
            let d0 = d.lo();
            if d.len() >= 2 {
                let shape = &d.shape;
                if let Some(k) = (1..shape.size()).find(|&k| shape.image(k) == 0) {
                    return Ok(Choice {
                        x_pos: d0 + k as u64 - 1,
                        y_pos: c.hi(),
                        c,
                        d,
                        case: MarkerCase::LeftmostPreimage,
                    });
                }
                let w = d0 + shape.image(0) as u64;
                if case_a && w > d0 {
                    return Ok(Choice {
                        x_pos: c.hi(),
                        y_pos: w - 1,
                        c,
                        d,
                        case: MarkerCase::LeftmostImage,
                    });
                }
            }
            c = d;
        }
        Err(TreeError::Precondition(format!(
            "no adjacent blocks with a marker pair within {PAIR_SEARCH} blocks of {from}"
        )))
    }
}
