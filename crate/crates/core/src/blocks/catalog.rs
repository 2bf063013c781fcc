use std::collections::BTreeMap;

use thiserror::Error;

use super::Block;
use crate::structure::{FiniteStructure, Interval};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("block {new} overlaps recorded occurrence {existing}")]
pub struct OverlapError {
    pub new: Interval,
    pub existing: Interval,
}

/// Distinct f-types seen so far and where each occurs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BlockTypeCatalog {
    types: Vec<FiniteStructure>,
    occurrences: Vec<Vec<Interval>>,
    // lo → (hi, type) over all occurrences, for overlap checks.
    by_start: BTreeMap<u64, (u64, usize)>,
}

impl BlockTypeCatalog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn types(&self) -> &[FiniteStructure] {
        &self.types
    }

    pub fn occurrences(&self, ty: usize) -> &[Interval] {
        &self.occurrences[ty]
    }

    pub fn type_of(&self, shape: &FiniteStructure) -> Option<usize> {
        self.types.iter().position(|t| t == shape)
    }

    /// Records `b`, returning the index of its type.
    pub fn insert(&mut self, b: &Block) -> Result<usize, OverlapError> {
        let iv = b.interval;
        let before = self.by_start.range(..=iv.hi()).next_back();
        if let Some((&lo, &(hi, _))) = before {
            let existing = Interval::new(lo, hi);
            if existing.overlaps(&iv) {
                return Err(OverlapError { new: iv, existing });
            }
        }
        let ty = match self.type_of(&b.shape) {
            Some(t) => t,
            None => {
                self.types.push(b.shape.clone());
                self.occurrences.push(Vec::new());
                self.types.len() - 1
            }
        };
        self.occurrences[ty].push(iv);
        self.by_start.insert(iv.lo(), (iv.hi(), ty));
        Ok(ty)
    }
}

/// Functional form of [`BlockTypeCatalog::insert`].
pub fn catalog_update(mut c: BlockTypeCatalog, b: &Block) -> Result<BlockTypeCatalog, OverlapError> {
    c.insert(b)?;
    Ok(c)
}
