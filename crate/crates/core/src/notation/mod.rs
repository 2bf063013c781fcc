//! Notations for `ω`: bijections `σ` given by a forward and a backward
//! program, with the checks and translations built on them.

mod classify;
mod strings;
mod translate;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::catalog;
use crate::machine::{ParseError, Program};

pub use classify::{everywhere_computable_classifier, ClassKind, ClassVerdict, DEFAULT_THRESHOLD_DIVISOR};
pub use strings::{canonical_enumeration, length_lex_decode, length_lex_encode, EnumerationError};
pub use translate::{preimage_relation, shapiro_translate, verify_acceptability, Acceptability, TranslateError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum NotationError {
    #[error("program exhausted its budget on input {0}")]
    Exhausted(u64),
    #[error("forward and backward disagree at {0}")]
    NotInverse(u64),
}

/// `σ : ω → ω` with `forward` computing `σ` and `backward` computing `σ⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Notation {
    pub forward: Program,
    pub backward: Program,
    /// Suggested working bound for prefix-scale checks.
    pub hint: Option<u64>,
}

impl Notation {
    pub fn identity() -> Self {
        Notation {
            forward: catalog::identity(),
            backward: catalog::identity(),
            hint: None,
        }
    }

    /// The notation whose order lists `listing[0], listing[1], …` and then
    /// every `k ≥ listing.len()` in place: `σ⁻¹(k) = listing[k]`.
    ///
    /// `listing` must be a permutation of `0..listing.len()`.
    pub fn from_listing(listing: &[u64]) -> Self {
        let mut inverse = vec![0; listing.len()];
        for (k, &a) in listing.iter().enumerate() {
            inverse[a as usize] = k as u64;
        }
        Notation {
            forward: catalog::lookup_table(&inverse, 0),
            backward: catalog::lookup_table(listing, 0),
            hint: Some(listing.len() as u64),
        }
    }

    pub fn sigma(&self, a: u64, budget: u64) -> Result<u64, NotationError> {
        self.forward.evaluate(a, budget).value().ok_or(NotationError::Exhausted(a))
    }

    pub fn sigma_inv(&self, k: u64, budget: u64) -> Result<u64, NotationError> {
        self.backward.evaluate(k, budget).value().ok_or(NotationError::Exhausted(k))
    }

    /// Checks `σ⁻¹(σ(a)) = a` and `σ(σ⁻¹(a)) = a` for `a < n`.
    pub fn check_inverse(&self, n: u64, budget: u64) -> Result<(), NotationError> {
        for a in 0..n {
            if self.sigma_inv(self.sigma(a, budget)?, budget)? != a || self.sigma(self.sigma_inv(a, budget)?, budget)? != a {
                return Err(NotationError::NotInverse(a));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error("missing section {0}")]
    Missing(&'static str),
    #[error("unexpected text before the first section: {0}")]
    Stray(String),
    #[error("bad HINT line: {0}")]
    Hint(String),
    #[error("in {section}: {error}")]
    Program { section: &'static str, error: ParseError },
}

/// Bundle text: a `FORWARD` line, program text, a `BACKWARD` line, program
/// text, and optionally a line `HINT n=<k>`.
impl FromStr for Notation {
    type Err = BundleError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut sections: [Option<String>; 2] = [None, None];
        let mut hint = None;
        let mut current: Option<usize> = None;
        for line in text.lines() {
            match line.trim() {
                "FORWARD" => {
                    sections[0] = Some(String::new());
                    current = Some(0);
                }
                "BACKWARD" => {
                    sections[1] = Some(String::new());
                    current = Some(1);
                }
                t if t.starts_with("HINT") => {
                    let k = t
                        .strip_prefix("HINT")
                        .map(str::trim)
                        .and_then(|r| r.strip_prefix("n="))
                        .and_then(|v| v.parse().ok())
                        .ok_or_else(|| BundleError::Hint(t.to_string()))?;
                    hint = Some(k);
                }
                t => match current {
                    Some(i) => {
                        let buf = sections[i].as_mut().expect("section open");
                        buf.push_str(line);
                        buf.push('\n');
                    }
                    None if t.is_empty() || t.starts_with('#') => {}
                    None => return Err(BundleError::Stray(t.to_string())),
                },
            }
        }
        let [forward, backward] = sections;
        let parse = |section: &'static str, src: Option<String>| -> Result<Program, BundleError> {
            let src = src.ok_or(BundleError::Missing(section))?;
            Program::parse(&src).map_err(|error| BundleError::Program { section, error })
        };
        Ok(Notation {
            forward: parse("FORWARD", forward)?,
            backward: parse("BACKWARD", backward)?,
            hint,
        })
    }
}

impl fmt::Display for Notation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FORWARD\n{}BACKWARD\n{}", self.forward, self.backward)?;
        if let Some(k) = self.hint {
            writeln!(f, "HINT n={k}")?;
        }
        Ok(())
    }
}
