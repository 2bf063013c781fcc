//! Reading `Succ_A` off `f_A`, and the easy direction `f_A ≤_T Succ_A`.

use std::collections::HashMap;

use serde::Serialize;

use super::embed::{first_into, SegmentSequence, Target};
use super::RecoveryError;
use crate::blocks::BlockFunction;
use crate::copies::CopyOracle;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "event", rename_all = "kebab-case")]
pub enum RecoveryEvent {
    Probe { element: u64 },
    SegmentConfirmed { j: usize, elements: Vec<u64> },
    Answer { x: u64, successor: u64 },
}

/// `Succ_A(x)` from `less` and `fimg` alone.
///
/// Naturals are revealed one per round and slotted into place by `less`.
/// After each reveal every segment `B_j`, least `j` first, is searched for
/// among the revealed elements. A match is an initial segment of `A`, since
/// `B_j` embeds into `(ω, <, f)` only once; the answer is read off as soon
/// as a match contains `x` and something after it. The budget bounds the
/// number of reveals.
pub fn recover_successor(a: &dyn CopyOracle, segs: &SegmentSequence, x: u64, budget: u64) -> Result<u64, RecoveryError> {
    recover_successor_traced(a, segs, x, budget, &mut |_| {})
}

pub fn recover_successor_traced(
    a: &dyn CopyOracle,
    segs: &SegmentSequence,
    x: u64,
    budget: u64,
    trace: &mut dyn FnMut(RecoveryEvent),
) -> Result<u64, RecoveryError> {
    let mut revealed: Vec<u64> = Vec::new();
    let mut images: HashMap<u64, u64> = HashMap::new();
    let mut confirmed: Vec<Option<Vec<u64>>> = vec![None; segs.len()];
    for z in 0..budget {
        trace(RecoveryEvent::Probe { element: z });
        let at = revealed.partition_point(|&r| a.less(r, z));
        revealed.insert(at, z);
        images.insert(z, a.fimg(z).map_err(|_| RecoveryError::Exhausted)?);

        let index: HashMap<u64, usize> = revealed.iter().enumerate().map(|(p, &e)| (e, p)).collect();
        let vals: Vec<Option<usize>> = revealed.iter().map(|e| index.get(&images[e]).copied()).collect();
        for (j, b) in segs.iter().enumerate() {
            if b.size() > revealed.len() {
                break;
            }
            if confirmed[j].is_none() {
                // B_j extends B_{j-1}, so no later segment can embed either.
                let Some(iota) = first_into(b, &Target { vals: &vals }) else {
                    break;
                };
                let elements: Vec<u64> = iota.iter().map(|&p| revealed[p]).collect();
                trace(RecoveryEvent::SegmentConfirmed {
                    j,
                    elements: elements.clone(),
                });
                confirmed[j] = Some(elements);
            }
            if let Some(seg) = &confirmed[j] {
                if let Some(p) = seg.iter().position(|&e| e == x) {
                    if p + 1 < seg.len() {
                        let successor = seg[p + 1];
                        trace(RecoveryEvent::Answer { x, successor });
                        return Ok(successor);
                    }
                }
            }
        }
    }
    Err(RecoveryError::Exhausted)
}

/// `f_A(x)` from a `Succ_A` oracle: walk from the `<_A`-least element to
/// find the position of `x`, apply `f`, walk again. The least element is
/// the one non-uniform constant of the reduction. The budget bounds the
/// number of successor queries.
pub fn reduce_f_to_succ(
    succ: &dyn Fn(u64) -> u64,
    least: u64,
    f: &BlockFunction,
    x: u64,
    budget: u64,
) -> Result<u64, RecoveryError> {
    let mut calls = 0u64;
    let mut step = |e: u64| {
        calls += 1;
        if calls > budget {
            Err(RecoveryError::Exhausted)
        } else {
            Ok(succ(e))
        }
    };
    let mut e = least;
    let mut p = 0u64;
    while e != x {
        e = step(e)?;
        p += 1;
    }
    let target = f.value(p).map_err(|_| RecoveryError::Exhausted)?;
    let mut e = least;
    for _ in 0..target {
        e = step(e)?;
    }
    Ok(e)
}
