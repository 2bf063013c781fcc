//! Block functions: closures, block recovery under a computable `cp_f`,
//! brute-force prefix decomposition and classification.

mod catalog;
mod closure;
mod decompose;
mod function;

use std::fmt;

use thiserror::Error;

use crate::structure::{FiniteStructure, Interval};

pub use catalog::{catalog_update, BlockTypeCatalog, OverlapError};
pub use closure::{find_block, find_block_with_ceiling, preimage_closure, Scanner, DEFAULT_CEILING};
pub use decompose::{
    classify_prefix, closed_initial_segments, cp_bounded, decompose_prefix, decompose_prefix_partial, Classification,
    DecomposeFailure,
};
pub use function::{is_block_shape, BlockFunction, BlockSpec, CpOracle, FnError, SpecParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum BlockError {
    #[error("budget exhausted")]
    Exhausted,
    #[error("closure of {x} grew past {size} elements without closing")]
    NotABlock { x: u64, size: usize },
    #[error("f({0}) is outside the known prefix")]
    Undefined(u64),
}

impl From<FnError> for BlockError {
    fn from(e: FnError) -> Self {
        match e {
            FnError::Exhausted(_) => BlockError::Exhausted,
            FnError::Undefined(x) => BlockError::Undefined(x),
        }
    }
}

/// An f-block: an f-closed interval together with `f` restricted to it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Block {
    pub interval: Interval,
    pub shape: FiniteStructure,
}

impl Block {
    /// Builds the block on `[lo, lo + values.len())` from the raw values of
    /// `f` there. Panics if some value leaves the interval.
    pub fn from_values(lo: u64, values: &[u64]) -> Self {
        assert!(!values.is_empty());
        let hi = lo + values.len() as u64 - 1;
        let fvals = values
            .iter()
            .map(|&v| {
                assert!(lo <= v && v <= hi, "value {v} escapes [{lo},{hi}]");
                (v - lo) as usize
            })
            .collect();
        Block {
            interval: Interval::new(lo, hi),
            shape: FiniteStructure::new(fvals),
        }
    }

    pub fn lo(&self) -> u64 {
        self.interval.lo()
    }

    pub fn hi(&self) -> u64 {
        self.interval.hi()
    }

    pub fn len(&self) -> u64 {
        self.interval.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.interval, self.shape)
    }
}
