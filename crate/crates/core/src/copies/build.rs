//! Copy constructors: standard, schedule-driven, and the c.e. and Δ₂ encodings.

use thiserror::Error;

use super::ComputableCopy;
use crate::blocks::{BlockFunction, FnError};
use crate::ce::CeSet;
use crate::machine::Program;

/// The identity presentation.
pub fn standard_copy(f: BlockFunction) -> ComputableCopy {
    ComputableCopy::from_order(f, Vec::new())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleOp {
    Append,
    /// Insert the new element immediately before position `k`.
    InsertAt(usize),
}

impl ScheduleOp {
    /// Program output `0` appends; `k + 1` inserts at `k`.
    pub fn decode(v: u64) -> Self {
        match v {
            0 => ScheduleOp::Append,
            k => ScheduleOp::InsertAt(k as usize - 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ScheduleError {
    #[error("stage {stage}: schedule program exhausted its budget")]
    Exhausted { stage: u64 },
    #[error("stage {stage}: position {position} is outside the built prefix")]
    OutOfRange { stage: u64, position: usize },
    #[error("stage {stage}: insertion before element {element} violates the delay bound")]
    DelayBound { stage: u64, element: u64 },
}

/// Builds `n` stages; stage `s` places element `s` as told by `ops[s]`.
///
/// An insertion at stage `s` in front of an element `y` is allowed only
/// while `s < 2y + 2`, so every element receives finitely many predecessors.
pub fn schedule_copy_ops(f: BlockFunction, ops: &[ScheduleOp]) -> Result<ComputableCopy, ScheduleError> {
    let mut order: Vec<u64> = Vec::with_capacity(ops.len());
    for (s, op) in ops.iter().enumerate() {
        let stage = s as u64;
        match *op {
            ScheduleOp::Append => order.push(stage),
            ScheduleOp::InsertAt(k) => {
                if k >= order.len() {
                    return Err(ScheduleError::OutOfRange { stage, position: k });
                }
                let least = *order[k..].iter().min().expect("nonempty");
                if stage >= 2 * least + 2 {
                    return Err(ScheduleError::DelayBound { stage, element: least });
                }
                order.insert(k, stage);
            }
        }
    }
    Ok(ComputableCopy::from_order(f, order))
}

/// [`schedule_copy_ops`] with the op for stage `s` computed by `schedule`
/// on input `s` within `budget` steps.
pub fn schedule_copy(f: BlockFunction, schedule: &Program, n: u64, budget: u64) -> Result<ComputableCopy, ScheduleError> {
    let ops = (0..n)
        .map(|s| {
            schedule
                .evaluate(s, budget)
                .value()
                .map(ScheduleOp::decode)
                .ok_or(ScheduleError::Exhausted { stage: s })
        })
        .collect::<Result<Vec<_>, _>>()?;
    schedule_copy_ops(f, &ops)
}

/// The marker pair `(a_e, b_e)` of the c.e. encoding.
pub fn marker_pair(e: u64) -> (u64, u64) {
    (2 * e, 2 * e + 1)
}

/// Copy of `(ω, <)` in which `Succ_A(a_e) = b_e` iff `e ∉ W_{stage_budget}`,
/// for `e < markers`.
///
/// Markers start adjacent; when `e` enters `W` one fresh element is put
/// between them. The function is the identity.
pub fn ce_encoded_copy(w: &CeSet, stage_budget: u64, markers: u64) -> ComputableCopy {
    let mut order: Vec<u64> = (0..2 * markers).collect();
    let mut fresh = 2 * markers;
    let mut seen = vec![false; markers as usize];
    for s in 0..=stage_budget {
        for e in w.enumerate(s) {
            if e < markers && !seen[e as usize] {
                seen[e as usize] = true;
                let (_, b) = marker_pair(e);
                let at = order.iter().position(|&x| x == b).expect("marker placed");
                order.insert(at, fresh);
                fresh += 1;
            }
        }
    }
    ComputableCopy::from_order(BlockFunction::identity(), order)
}

/// Stage-`s` guess at membership of `e` in a Δ₂ set.
pub trait Delta2Approx {
    fn approx(&self, e: u64, s: u64) -> bool;
}

impl<F: Fn(u64, u64) -> bool> Delta2Approx for F {
    fn approx(&self, e: u64, s: u64) -> bool {
        self(e, s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum Delta2Error {
    #[error("no suitable place for pair {e} within the padding horizon")]
    Deficient { e: u64 },
    #[error(transparent)]
    Function(#[from] FnError),
}

fn sits(f: &BlockFunction, p: u64, member: bool) -> Result<bool, FnError> {
    let (a, b) = (f.value(p)?, f.value(p + 1)?);
    Ok(if member { a == p + 1 && b == p } else { a == p && b == p + 1 })
}

/// Copy in which `4e` and `4e + 2` are adjacent and, at the last stage,
/// swapped by `f_A` when `e` is guessed in `X` and fixed otherwise.
///
/// Pair `e` enters at stage `e`. At each stage every pair that no longer
/// sits on the right kind of spot of `f` is pushed right by inserting
/// padding (naturals outside the pairs) in front of it; nothing already
/// placed is ever reordered.
pub fn delta2_encoded_copy(
    f: BlockFunction,
    x: &dyn Delta2Approx,
    stage_budget: u64,
    pairs: u64,
) -> Result<ComputableCopy, Delta2Error> {
    let pairs = pairs.min(stage_budget + 1);
    let reserved = |z: u64| z.is_multiple_of(2) && z / 4 < pairs;
    let mut padding = (0u64..).filter(move |&z| !reserved(z));
    let mut order: Vec<u64> = Vec::new();
    let mut starts: Vec<usize> = Vec::new();
    for s in 0..=stage_budget {
        if s < pairs {
            starts.push(order.len());
            order.push(4 * s);
            order.push(4 * s + 2);
        }
        for e in 0..starts.len() {
            let member = x.approx(e as u64, s);
            let horizon = 4 * starts[e] + 64;
            let mut pushed = 0;
            while !sits(&f, starts[e] as u64, member)? {
                if pushed == horizon {
                    return Err(Delta2Error::Deficient { e: e as u64 });
                }
                order.insert(starts[e], padding.next().expect("infinite"));
                for later in starts.iter_mut().skip(e) {
                    *later += 1;
                }
                pushed += 1;
            }
        }
    }
    Ok(ComputableCopy::from_order(f, order))
}
