//! Prefix-scale verdicts for the two everywhere-computable classes: almost
//! constant or almost identity functions, and finite or cofinite sets.

use std::collections::HashMap;

use serde::Serialize;

use super::NotationError;
use crate::machine::Program;

/// Exceptions tolerated: `n / DEFAULT_THRESHOLD_DIVISOR`.
pub const DEFAULT_THRESHOLD_DIVISOR: u64 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassKind {
    Function,
    /// Membership means a nonzero output.
    Set,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum ClassVerdict {
    AlmostConstant { value: u64, exceptions: u64 },
    AlmostIdentity { exceptions: u64 },
    Finite { card: u64 },
    Cofinite { co_card: u64 },
    /// Both exception counts exceed the threshold.
    OutsideClassOnPrefix { first: u64, second: u64 },
}

/// Evaluates `obj` on `[0, n)` and classifies the table with at most
/// `threshold` exceptions (default `n / 4`). Ties prefer the constant and
/// the finite reading.
pub fn everywhere_computable_classifier(
    kind: ClassKind,
    obj: &Program,
    n: u64,
    budget: u64,
    threshold: Option<u64>,
) -> Result<ClassVerdict, NotationError> {
    let threshold = threshold.unwrap_or(n / DEFAULT_THRESHOLD_DIVISOR);
    let vals = (0..n)
        .map(|x| obj.evaluate(x, budget).value().ok_or(NotationError::Exhausted(x)))
        .collect::<Result<Vec<u64>, _>>()?;
    Ok(match kind {
        ClassKind::Function => {
            let mut counts: HashMap<u64, u64> = HashMap::new();
            for &v in &vals {
                *counts.entry(v).or_default() += 1;
            }
            // Most frequent value, least value on ties.
            let (value, hits) = counts
                .into_iter()
                .max_by_key(|&(v, c)| (c, std::cmp::Reverse(v)))
                .unwrap_or((0, 0));
            let constant_ex = n - hits;
            let identity_ex = vals.iter().enumerate().filter(|&(x, &v)| v != x as u64).count() as u64;
            if constant_ex <= threshold && constant_ex <= identity_ex {
                ClassVerdict::AlmostConstant {
                    value,
                    exceptions: constant_ex,
                }
            } else if identity_ex <= threshold {
                ClassVerdict::AlmostIdentity { exceptions: identity_ex }
            } else {
                ClassVerdict::OutsideClassOnPrefix {
                    first: constant_ex,
                    second: identity_ex,
                }
            }
        }
        ClassKind::Set => {
            let card = vals.iter().filter(|&&v| v != 0).count() as u64;
            let co_card = n - card;
            if card <= threshold && card <= co_card {
                ClassVerdict::Finite { card }
            } else if co_card <= threshold {
                ClassVerdict::Cofinite { co_card }
            } else {
                ClassVerdict::OutsideClassOnPrefix {
                    first: card,
                    second: co_card,
                }
            }
        }
    })
}
