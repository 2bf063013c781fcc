//! Computable copies `A = (ω, <_A, f_A)` of `(ω, <, f)` and the builders
//! that produce them.

mod build;
mod session;

use std::collections::HashMap;

use crate::blocks::{BlockFunction, FnError};

pub use build::{
    ce_encoded_copy, delta2_encoded_copy, marker_pair, schedule_copy, schedule_copy_ops, standard_copy, Delta2Approx,
    Delta2Error, ScheduleError, ScheduleOp,
};
pub use session::{CopySession, Event, LogParseError, Restraint, RestraintViolation};

/// What consumer code may ask of a copy.
pub trait CopyOracle {
    /// `x <_A y`.
    fn less(&self, x: u64, y: u64) -> bool;
    /// `f_A(x)`.
    fn fimg(&self, x: u64) -> Result<u64, FnError>;
}

/// A copy given by a finite list of placed naturals, in `<_A` order,
/// followed by every other natural in increasing order.
///
/// The position map is the hidden isomorphism onto `(ω, <)`; the harness may
/// read it through [`ComputableCopy::position`] and friends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComputableCopy {
    f: BlockFunction,
    order: Vec<u64>,
    index: HashMap<u64, u64>,
    placed_sorted: Vec<u64>,
}

impl ComputableCopy {
    /// Panics if `order` repeats an element.
    pub fn from_order(f: BlockFunction, order: Vec<u64>) -> Self {
        let mut index = HashMap::with_capacity(order.len());
        for (p, &x) in order.iter().enumerate() {
            assert!(index.insert(x, p as u64).is_none(), "element {x} placed twice");
        }
        let mut placed_sorted = order.clone();
        placed_sorted.sort_unstable();
        ComputableCopy {
            f,
            order,
            index,
            placed_sorted,
        }
    }

    pub fn function(&self) -> &BlockFunction {
        &self.f
    }

    /// The explicitly placed prefix.
    pub fn placed(&self) -> &[u64] {
        &self.order
    }

    fn placed_below(&self, z: u64) -> u64 {
        self.placed_sorted.partition_point(|&p| p < z) as u64
    }

    /// Number of `<_A`-predecessors of `x`.
    pub fn position(&self, x: u64) -> u64 {
        match self.index.get(&x) {
            Some(&p) => p,
            None => self.order.len() as u64 + x - self.placed_below(x),
        }
    }

    /// The element at position `p`; the ground-truth isomorphism `ω → A`.
    pub fn element_at(&self, p: u64) -> u64 {
        let len = self.order.len() as u64;
        if p < len {
            return self.order[p as usize];
        }
        let r = p - len;
        // Least z with exactly r unplaced naturals below it and z unplaced.
        let (mut lo, mut hi) = (r, r + self.placed_sorted.len() as u64);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            let unplaced_le = mid + 1 - self.placed_below(mid + 1);
            if unplaced_le > r {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        lo
    }

    /// `Succ_A(x)`; harness only.
    pub fn succ(&self, x: u64) -> u64 {
        self.element_at(self.position(x) + 1)
    }

    /// The `<_A`-least element.
    pub fn least(&self) -> u64 {
        self.element_at(0)
    }
}

impl CopyOracle for ComputableCopy {
    fn less(&self, x: u64, y: u64) -> bool {
        self.position(x) < self.position(y)
    }

    fn fimg(&self, x: u64) -> Result<u64, FnError> {
        Ok(self.element_at(self.f.value(self.position(x))?))
    }
}
