//! Strings over `{a, b}` and the canonical listing of a decidable set of them.

use thiserror::Error;

use crate::machine::Program;

/// Index of `s` in length-lexicographic order: `"" = 0`, `"a" = 1`,
/// `"b" = 2`, `"aa" = 3`, …
///
/// Panics on characters other than `a` and `b`.
pub fn length_lex_encode(s: &str) -> u64 {
    let len = s.len() as u32;
    let offset = s.chars().fold(0u64, |acc, ch| {
        acc * 2
            + match ch {
                'a' => 0,
                'b' => 1,
                other => panic!("not in the alphabet: {other:?}"),
            }
    });
    (1u64 << len) - 1 + offset
}

pub fn length_lex_decode(i: u64) -> String {
    // Length L has indices [2^L - 1, 2^{L+1} - 1).
    let len = 63 - (i + 1).leading_zeros();
    let offset = i + 1 - (1u64 << len);
    (0..len)
        .rev()
        .map(|b| if offset >> b & 1 == 0 { 'a' } else { 'b' })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("only {found} members below the horizon")]
    Exhausted { found: usize },
    #[error("program exhausted its budget on string index {0}")]
    Budget(u64),
}

/// `s_0, …, s_{n-1}`: members of `S` among the first `horizon` strings,
/// listed by increasing `c`-code.
///
/// `membership` and `coder` read the length-lex index of a string;
/// membership means a nonzero output.
pub fn canonical_enumeration(
    membership: &Program,
    coder: &Program,
    n: usize,
    horizon: u64,
    budget: u64,
) -> Result<Vec<String>, EnumerationError> {
    let mut found: Vec<(u64, u64)> = Vec::new();
    for i in 0..horizon {
        let member = membership.evaluate(i, budget).value().ok_or(EnumerationError::Budget(i))?;
        if member != 0 {
            let code = coder.evaluate(i, budget).value().ok_or(EnumerationError::Budget(i))?;
            found.push((code, i));
        }
    }
    found.sort_unstable();
    found.dedup_by_key(|&mut (code, _)| code);
    if found.len() < n {
        return Err(EnumerationError::Exhausted { found: found.len() });
    }
    Ok(found[..n].iter().map(|&(_, i)| length_lex_decode(i)).collect())
}
