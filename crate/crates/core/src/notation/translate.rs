//! Preimages of relations under a notation, acceptability, and the
//! translation of an acceptable notation onto the standard one.

use serde::Serialize;
use thiserror::Error;

use super::{Notation, NotationError};
use crate::machine::Program;

/// `rel(σ(a_1), …, σ(a_k))`.
pub fn preimage_relation(
    sigma: &Notation,
    rel: &dyn Fn(&[u64]) -> bool,
    tuple: &[u64],
    budget: u64,
) -> Result<bool, NotationError> {
    let images = tuple.iter().map(|&a| sigma.sigma(a, budget)).collect::<Result<Vec<_>, _>>()?;
    Ok(rel(&images))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Acceptability {
    /// The candidate matched `σ⁻¹(σ(a) + 1)` at every tested `a`.
    ConfirmedOnPrefix { checked: u64 },
    Refuted { a: u64 },
    Exhausted { a: u64 },
}

/// Tests `succ(a) = σ⁻¹(σ(a) + 1)` for every `a < n` with `σ(a) + 1 < n`.
pub fn verify_acceptability(sigma: &Notation, succ: &Program, n: u64, budget: u64) -> Acceptability {
    let mut checked = 0;
    for a in 0..n {
        let step = || -> Result<Option<bool>, NotationError> {
            let k = sigma.sigma(a, budget)?;
            if k + 1 >= n {
                return Ok(None);
            }
            let want = sigma.sigma_inv(k + 1, budget)?;
            let got = succ.evaluate(a, budget).value().ok_or(NotationError::Exhausted(a))?;
            Ok(Some(got == want))
        };
        match step() {
            Ok(None) => {}
            Ok(Some(true)) => checked += 1,
            Ok(Some(false)) => return Acceptability::Refuted { a },
            Err(_) => return Acceptability::Exhausted { a },
        }
    }
    Acceptability::ConfirmedOnPrefix { checked }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    /// The prefix does not look like `(ω, Succ)`: no unique element outside
    /// the range of the successor, or the successor revisits an element.
    #[error("successor structure refuted on the prefix; elements outside its range: {outside:?}")]
    RefutedStructure { outside: Vec<u64> },
    #[error("program exhausted its budget on input {0}")]
    Exhausted(u64),
}

/// The table of `g` on `[0, n)`, where `g` is the isomorphism of
/// `(ω, succ)` onto `(ω, x ↦ x + 1)`.
///
/// The generator is the one element of `[0, n)` outside the range of
/// `succ` on `[0, H)`, where `H = max(2n, n + hint)` allows for
/// predecessors that lie past the prefix. Iterating `succ` from it lists
/// the order; the `k`-th iterate is sent to `k`.
pub fn shapiro_translate(sigma: &Notation, succ: &Program, n: u64, budget: u64) -> Result<Vec<u64>, TranslateError> {
    let horizon = (2 * n).max(n + sigma.hint.unwrap_or(0));
    let next = |a: u64| succ.evaluate(a, budget).value().ok_or(TranslateError::Exhausted(a));
    let mut hit = vec![false; n as usize];
    for a in 0..horizon {
        let b = next(a)?;
        if b < n {
            hit[b as usize] = true;
        }
    }
    let outside: Vec<u64> = (0..n).filter(|&a| !hit[a as usize]).collect();
    let [generator] = outside[..] else {
        return Err(TranslateError::RefutedStructure { outside });
    };
    let mut g: Vec<Option<u64>> = vec![None; n as usize];
    let mut assigned = 0;
    let mut cur = generator;
    let mut k = 0u64;
    while assigned < n {
        if k > 4 * horizon {
            return Err(TranslateError::Exhausted(cur));
        }
        if cur < n {
            if g[cur as usize].is_some() {
                return Err(TranslateError::RefutedStructure { outside });
            }
            g[cur as usize] = Some(k);
            assigned += 1;
        }
        k += 1;
        cur = next(cur)?;
    }
    Ok(g.into_iter().map(|v| v.expect("assigned")).collect())
}
