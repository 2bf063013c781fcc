//! Independent re-checking of a Step-7 stop.

use std::fmt;

use serde::Serialize;

use super::opponent::{gamma, gamma_prefix, Opponent, Triple};
use crate::blocks::BlockFunction;
use crate::copies::CopySession;
use crate::structure::pair;

/// Everything a Step-7 stop claims, as recorded during the run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StopWitness {
    pub requirement: usize,
    pub address: String,
    pub m: u64,
    pub x: u64,
    pub y: u64,
    pub s_prime: u64,
    pub t_prime: u64,
    /// Use of `Ψ^{W_{s'}↾t'}(⟨x, y⟩) = 0`.
    pub u: u64,
    pub s_double: u64,
    pub t_double: u64,
    pub s_triple: u64,
    /// Number of session events before Step 4 ran; replaying them gives
    /// `A_{s'}`.
    pub session_events_at_s_prime: usize,
    /// `W_{s'} ∩ [0, t')`.
    pub w_at_s_prime: Vec<u64>,
    /// `W_{s''} ∩ [0, t'')`.
    pub w_at_s_double: Vec<u64>,
}

impl StopWitness {
    pub fn code(&self) -> u64 {
        pair(self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopClause {
    /// `t' ≤ t''` and `s' < s'' < s'''`.
    StageOrder,
    /// `Ψ^{W_{s'}↾t'}(⟨x, y⟩) = 0` with use `u ≤ t'`.
    UseBound,
    /// Some `a < u` lies in `W_{s''} ∖ W_{s'}`, and `Ψ` then reads 1.
    NoChangeElement,
    /// `Φ^{Γ_{A,s'}}(a) = 0`, giving the use `v`.
    PhiComputation,
    /// `Γ_A↾v = Γ_{A,s'}↾v` in the final session.
    UseViolated,
    /// `Γ_A(⟨x, y⟩) = 0` at `s'` and in the final session.
    FinalValue,
    /// The session log does not replay.
    Replay,
}

impl fmt::Display for StopClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("serializable");
        write!(f, "{}", s.as_str().expect("unit variant"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum StopCheck {
    Verified { a: u64, v: u64 },
    Failed { clause: StopClause },
}

impl StopCheck {
    pub fn is_verified(&self) -> bool {
        matches!(self, StopCheck::Verified { .. })
    }
}

fn characteristic(members: &[u64], len: u64) -> Vec<bool> {
    let mut out = vec![false; len as usize];
    for &x in members {
        if x < len {
            out[x as usize] = true;
        }
    }
    out
}

/// Re-derives each claim of outcome `s` from the witness, the final session
/// (whose log is replayed to recover `A_{s'}`) and the triple.
pub fn verify_stop_witness(w: &StopWitness, session: &CopySession, f: &BlockFunction, triple: &Triple) -> StopCheck {
    match check(w, session, f, triple) {
        Ok((a, v)) => StopCheck::Verified { a, v },
        Err(clause) => StopCheck::Failed { clause },
    }
}

fn check(w: &StopWitness, session: &CopySession, f: &BlockFunction, triple: &Triple) -> Result<(u64, u64), StopClause> {
    use StopClause::*;
    if w.t_prime > w.t_double || !(w.s_prime < w.s_double && w.s_double < w.s_triple) {
        return Err(StageOrder);
    }
    let code = w.code();

    if let Opponent::Static(ce) = &triple.w {
        let at = |s: u64, t: u64| -> Vec<u64> { ce.enumerate(s).into_iter().filter(|&x| x < t).collect() };
        if at(w.s_prime, w.t_prime) != w.w_at_s_prime || at(w.s_double, w.t_double) != w.w_at_s_double {
            return Err(NoChangeElement);
        }
    }

    let w1 = characteristic(&w.w_at_s_prime, w.t_prime);
    match triple.psi.evaluate(code, &w1, w.s_prime).halted() {
        Some((0, u)) if u as u64 == w.u && w.u <= w.t_prime => {}
        _ => return Err(UseBound),
    }
    let w2 = characteristic(&w.w_at_s_double, w.t_double);
    if triple.psi.evaluate(code, &w2, w.s_double).halted().map(|(v, _)| v) != Some(1) {
        return Err(NoChangeElement);
    }
    let a = (0..w.u)
        .find(|&a| w2[a as usize] && !w1[a as usize])
        .ok_or(NoChangeElement)?;

    let events = session.log().get(..w.session_events_at_s_prime).ok_or(Replay)?;
    let text: String = events.iter().map(|e| format!("{e}\n")).collect();
    let then = CopySession::replay(&text).map_err(|_| Replay)?;
    let gamma_then = gamma_prefix(&then, f).map_err(|_| Replay)?;
    let v = match triple.phi.evaluate(a, &gamma_then, w.s_prime).halted() {
        Some((0, v)) => v,
        _ => return Err(PhiComputation),
    };

    let gamma_now = gamma_prefix(session, f).map_err(|_| Replay)?;
    if gamma_now.len() < v || gamma_now[..v] != gamma_then[..v] {
        return Err(UseViolated);
    }
    let then_c = gamma(&then, f, code).map_err(|_| Replay)?;
    let now_c = gamma(session, f, code).map_err(|_| Replay)?;
    if then_c || now_c {
        return Err(FinalValue);
    }
    Ok((a, v as u64))
}
