//! Computably enumerable sets given by stagewise approximations.

use std::collections::BTreeSet;

use crate::machine::Program;

/// A c.e. set `W` with finite stage approximations `W_s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CeSet {
    /// `W_s = { x ≤ s : program halts on x within s + 1 steps }`.
    Domain(Program),
    /// The halting set of a finite catalog:
    /// `W_s = { e < len : catalog[e] halts on input e within s steps }`.
    Halting(Vec<Program>),
    /// Explicit `(element, stage)` pairs; the element is in `W_s` once `s ≥ stage`.
    Scripted(Vec<(u64, u64)>),
}

impl CeSet {
    pub fn empty() -> Self {
        CeSet::Scripted(Vec::new())
    }

    /// `W_s`, sorted and duplicate-free.
    pub fn enumerate(&self, s: u64) -> Vec<u64> {
        match self {
            CeSet::Domain(p) => (0..=s).filter(|&x| p.evaluate(x, s + 1).value().is_some()).collect(),
            CeSet::Halting(catalog) => catalog
                .iter()
                .enumerate()
                .filter(|(e, p)| p.evaluate(*e as u64, s).value().is_some())
                .map(|(e, _)| e as u64)
                .collect(),
            CeSet::Scripted(events) => events
                .iter()
                .filter(|&&(_, at)| at <= s)
                .map(|&(x, _)| x)
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect(),
        }
    }

    /// Characteristic prefix of `W_s` of length `len`.
    pub fn prefix(&self, s: u64, len: usize) -> Vec<bool> {
        let mut out = vec![false; len];
        for x in self.enumerate(s) {
            if (x as usize) < len {
                out[x as usize] = true;
            }
        }
        out
    }
}

/// Free-function form of [`CeSet::enumerate`].
pub fn enumerate_ce(w: &CeSet, s: u64) -> Vec<u64> {
    w.enumerate(s)
}
