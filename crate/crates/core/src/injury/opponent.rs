//! Functional triples `(Φ, Ψ, W)` and the relation `Γ_A` they are played
//! against.

use super::layout::BlockCache;
use super::TreeError;
use crate::blocks::{BlockFunction, FnError};
use crate::catalog::{oracle_constant, query_if_equal, query_input};
use crate::ce::CeSet;
use crate::copies::CopySession;
use crate::machine::OracleProgram;
use crate::structure::{pair, pair_prefix_len};

/// How `W` is enumerated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Opponent {
    Static(CeSet),
    /// `element` enters `W` at the stage after `Γ_A(watch) = 1` is first
    /// seen at the end of a stage.
    Reactive { watch: u64, element: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple {
    pub phi: OracleProgram,
    pub psi: OracleProgram,
    pub w: Opponent,
}

/// `Γ_A(⟨x, y⟩)` on the current session: both placed and `f_A(x) = y`.
pub fn gamma(session: &CopySession, f: &BlockFunction, code: u64) -> Result<bool, FnError> {
    let (x, y) = crate::structure::unpair(code);
    let (Some(px), Some(py)) = (session.position(x), session.position(y)) else {
        return Ok(false);
    };
    Ok(f.value(px as u64)? == py as u64)
}

/// `Γ_A` on every code whose components are both below the session length.
///
/// Session elements are exactly `0..len`, so this is the part of `Γ_A`
/// that the session already determines.
pub fn gamma_prefix(session: &CopySession, f: &BlockFunction) -> Result<Vec<bool>, FnError> {
    let len = session.len() as u64;
    let size = pair_prefix_len(len) as usize;
    let mut out = vec![false; size];
    for (p, &x) in session.elements().iter().enumerate() {
        let q = f.value(p as u64)?;
        if q < len {
            let code = pair(x, session.element_at(q as usize));
            if (code as usize) < size {
                out[code as usize] = true;
            }
        }
    }
    Ok(out)
}

/// `⟨x_0, y_0⟩` as the root strategy picks it on an empty session.
pub fn first_marker_code(f: &BlockFunction, case_a: bool) -> Result<u64, TreeError> {
    let ch = BlockCache::new(f.clone()).choose(0, case_a)?;
    Ok(pair(ch.x_pos, ch.y_pos))
}

/// `Φ` copies `Γ_A(c)` at `c`, `Ψ` copies `W`, and `W` enumerates `c` as
/// soon as `Γ_A(c)` flips to 1. Both equations hold at every stage, so the
/// root strategy runs through to Step 7.
pub fn cooperating_triple(f: &BlockFunction, case_a: bool) -> Result<Triple, TreeError> {
    let c = first_marker_code(f, case_a)?;
    Ok(Triple {
        phi: query_if_equal(c),
        psi: query_input(),
        w: Opponent::Reactive { watch: c, element: c },
    })
}

/// As [`cooperating_triple`] but with `W` empty: the flip of `Γ_A(c)` is
/// never answered, so the root strategy waits at Step 5.
pub fn static_triple(f: &BlockFunction, case_a: bool) -> Result<Triple, TreeError> {
    let c = first_marker_code(f, case_a)?;
    Ok(Triple {
        phi: query_if_equal(c),
        psi: query_input(),
        w: Opponent::Static(CeSet::empty()),
    })
}

/// `Φ ≡ 1` against an empty `W`: Step 3 never sees agreement at 0.
pub fn silent_triple() -> Triple {
    Triple {
        phi: oracle_constant(1),
        psi: query_input(),
        w: Opponent::Static(CeSet::empty()),
    }
}
