//! Stage-bounded engine for the tree-of-strategies construction of a copy
//! `A` defeating each triple `(Φ_i, Ψ_i, W_i)`.
//!
//! Only the current path is stored: when a node's outcome moves, the nodes
//! below it are initialized (discarded, restraints released) and rebuilt
//! under the new address on later stages.

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use super::layout::BlockCache;
pub use super::layout::MarkerCase;
use super::opponent::{gamma, gamma_prefix, Opponent, Triple};
use super::witness::StopWitness;
use super::{address_string, Artifact, ConstructionReport, Outcome, RequirementStatus};
use crate::blocks::{Block, BlockFunction, CpOracle, FnError};
use crate::copies::{CopySession, RestraintViolation};
use crate::log::EventLog;
use crate::recovery::{find_semi_embedding, MarkedBlock, SemiEmbedding, SemiProblem};
use crate::structure::pair;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TreeConfig {
    pub stages: u64,
    /// Largest `m` a strategy may reach.
    pub m_cap: u64,
    /// Also accept blocks whose leftmost element moves right (item (ii)(a)).
    pub case_a: bool,
}

impl TreeConfig {
    pub fn new(stages: u64) -> Self {
        TreeConfig {
            stages,
            m_cap: 8,
            case_a: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Function(#[from] FnError),
    #[error(transparent)]
    Restraint(#[from] RestraintViolation),
}

/// Which Step the parameter `m` waits at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MPhase {
    Step3,
    Step5,
    Step6,
    Stopped,
}

/// The record of one value of `m`. Fields are written once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MRecord {
    pub m: u64,
    /// `s_m`, the stage Step 2 ran.
    pub stage: u64,
    /// Length of `A^{1,init}_m`; `C_m` starts here.
    pub init_len: usize,
    /// `C̃_m` and `D̃_m` as position ranges of `(ω, <, f)`.
    pub c_block: (u64, u64),
    pub d_block: (u64, u64),
    pub case: MarkerCase,
    pub x: u64,
    pub y: u64,
    /// First element of `C_m` and last element of `D_m`.
    pub c_first: u64,
    pub d_last: u64,
    pub phase: MPhase,
    pub s_prime: Option<u64>,
    pub t_prime: Option<u64>,
    pub u: Option<u64>,
    pub s_double: Option<u64>,
    pub t_double: Option<u64>,
    /// Session events before Step 4.
    pub session_events_at_s_prime: Option<usize>,
    /// `B_m = A_{s'}`: its elements in order and its blocks as position ranges.
    pub b_elements: Vec<u64>,
    pub b_blocks: Vec<(u64, u64)>,
    pub w_at_s_prime: Vec<u64>,
    pub w_at_s_double: Vec<u64>,
}

impl MRecord {
    pub fn code(&self) -> u64 {
        pair(self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrategyNode {
    pub requirement: usize,
    pub address: Vec<Outcome>,
    pub records: Vec<MRecord>,
    /// Index into the run's stop witnesses once Step 7 ran.
    pub stop: Option<usize>,
    /// Step 5 succeeded at `m = m_cap`.
    pub capped: bool,
}

impl StrategyNode {
    fn new(requirement: usize, address: Vec<Outcome>) -> Self {
        StrategyNode {
            requirement,
            address,
            records: Vec::new(),
            stop: None,
            capped: false,
        }
    }

    pub fn name(&self) -> String {
        format!("P{}{}", self.requirement, address_string(&self.address))
    }

    fn owner(&self, m: u64) -> String {
        format!("{}#{m}", self.name())
    }

    fn stop_owner(&self) -> String {
        format!("{}#stop", self.name())
    }

    /// `s` once stopped; otherwise `w_m` or `w'_m` for the newest `m`.
    pub fn outcome(&self) -> Outcome {
        if self.stop.is_some() {
            return Outcome::Stop;
        }
        match self.records.last() {
            None => Outcome::W(0),
            Some(r) => match r.phase {
                MPhase::Step3 => Outcome::W(r.m),
                MPhase::Step5 | MPhase::Step6 => Outcome::WPrime(r.m),
                MPhase::Stopped => Outcome::Stop,
            },
        }
    }

    pub fn status(&self) -> RequirementStatus {
        if let Some(i) = self.stop {
            return RequirementStatus::SatisfiedVia {
                outcome: "s".into(),
                witness: i as u64,
            };
        }
        match self.records.last() {
            None => RequirementStatus::Waiting { step: 2, m: Some(0) },
            Some(r) if self.capped => RequirementStatus::Budget { m: r.m },
            Some(r) => RequirementStatus::Waiting {
                step: if r.phase == MPhase::Step3 { 3 } else { 5 },
                m: Some(r.m),
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct TreeState {
    cache: BlockCache,
    triples: Vec<Triple>,
    config: TreeConfig,
    session: CopySession,
    path: Vec<StrategyNode>,
    stage: u64,
    /// Stage at which a reactive `W_i` enumerated its element.
    entered: Vec<Option<u64>>,
    stops: Vec<StopWitness>,
    trace: Vec<Vec<Outcome>>,
    log: EventLog,
}

#[derive(Debug, Clone)]
pub struct TreeRun {
    pub state: TreeState,
    pub report: ConstructionReport,
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

impl TreeState {
    pub fn session(&self) -> &CopySession {
        &self.session
    }

    pub fn function(&self) -> &BlockFunction {
        self.cache.function()
    }

    pub fn path(&self) -> &[StrategyNode] {
        &self.path
    }

    pub fn stops(&self) -> &[StopWitness] {
        &self.stops
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn log(&self) -> &EventLog {
        &self.log
    }

    fn f(&self) -> &BlockFunction {
        self.cache.function()
    }

    /// `W_{i,s}`.
    fn w_members(&self, i: usize, s: u64) -> Vec<u64> {
        match &self.triples[i].w {
            Opponent::Static(ce) => ce.enumerate(s),
            Opponent::Reactive { element, .. } => match self.entered[i] {
                Some(at) if at <= s => vec![*element],
                _ => Vec::new(),
            },
        }
    }

    fn gamma(&self, code: u64) -> Result<bool, TreeError> {
        Ok(gamma(&self.session, self.f(), code)?)
    }

    /// Appends elements until the session length is a block boundary of `f`.
    fn fill_to_cut(&mut self) -> Result<(), TreeError> {
        let len = self.session.len() as u64;
        if len == 0 {
            return Ok(());
        }
        let end = self.cache.containing(len - 1)?.hi() + 1;
        for _ in len..end {
            self.session.append()?;
        }
        Ok(())
    }

    /// The least `t ≥ lower`, `t ≤ s`, with `W_{i,s}↾t = Φ_i^{Γ_{A,s}}↾t`
    /// and `Γ_A(code) = Ψ_i^{W_{i,s}↾t}(code) = want`, with the use of `Ψ`.
    fn equations(&self, i: usize, code: u64, want: bool, lower: u64) -> Result<Option<(u64, u64)>, TreeError> {
        if self.gamma(code)? != want {
            return Ok(None);
        }
        let s = self.stage;
        let t = &self.triples[i];
        let oracle = gamma_prefix(&self.session, self.f())?;
        let w = characteristic(&self.w_members(i, s), s);
        let mut agree = 0u64;
        while agree < s {
            match t.phi.evaluate(agree, &oracle, s).halted() {
                Some((v, _)) if v == w[agree as usize] as u64 => agree += 1,
                _ => break,
            }
        }
        Ok(match t.psi.evaluate(code, &w[..agree as usize], s).halted() {
            Some((v, u)) if v == want as u64 => {
                let t = (u as u64).max(lower);
                (t <= agree).then_some((t, u as u64))
            }
            _ => None,
        })
    }

    fn step2(&mut self, k: usize, m: u64) -> Result<(), TreeError> {
        self.fill_to_cut()?;
        let from = self.session.len() as u64;
        let ch = self.cache.choose(from, self.config.case_a)?;
        while self.session.len() as u64 <= ch.d.hi() {
            self.session.append()?;
        }
        let el = |p: u64| self.session.element_at(p as usize);
        let (x, y, c_first, d_last) = (el(ch.x_pos), el(ch.y_pos), el(ch.c.lo()), el(ch.d.hi()));
        let first = el(0);
        let owner = self.path[k].owner(m);
        self.session.restrain(&owner, first, Some(d_last));
        let g = self.gamma(pair(x, y))?;
        self.log.record(
            "step2",
            &json!({
                "stage": self.stage, "node": self.path[k].name(), "m": m,
                "c": [ch.c.lo(), ch.c.hi()], "d": [ch.d.lo(), ch.d.hi()],
                "case": ch.case, "x": x, "y": y, "gamma": g,
            }),
        );
        self.path[k].records.push(MRecord {
            m,
            stage: self.stage,
            init_len: ch.c.lo() as usize,
            c_block: (ch.c.lo(), ch.c.hi()),
            d_block: (ch.d.lo(), ch.d.hi()),
            case: ch.case,
            x,
            y,
            c_first,
            d_last,
            phase: MPhase::Step3,
            s_prime: None,
            t_prime: None,
            u: None,
            s_double: None,
            t_double: None,
            session_events_at_s_prime: None,
            b_elements: Vec::new(),
            b_blocks: Vec::new(),
            w_at_s_prime: Vec::new(),
            w_at_s_double: Vec::new(),
        });
        Ok(())
    }

    fn step4(&mut self, k: usize, t_prime: u64, u: u64) -> Result<(), TreeError> {
        let i = self.path[k].requirement;
        let len = self.session.len() as u64;
        let b_blocks: Vec<(u64, u64)> = self.cache.within(len)?.iter().map(|b| (b.lo(), b.hi())).collect();
        let b_elements = self.session.elements().to_vec();
        let events = self.session.log().len();
        let w_at_s_prime: Vec<u64> = self.w_members(i, self.stage).into_iter().filter(|&a| a < t_prime).collect();
        let rec = self.path[k].records.last().expect("live m").clone();
        let owner = self.path[k].owner(rec.m);
        self.session.release(&owner);
        let at = self.session.position(rec.c_first).expect("C_m placed");
        self.session.insert_before(at)?;
        let first = self.session.element_at(0);
        self.session.restrain(&owner, first, Some(rec.d_last));
        let g = self.gamma(rec.code())?;
        self.log.record(
            "step4",
            &json!({
                "stage": self.stage, "node": self.path[k].name(), "m": rec.m,
                "t_prime": t_prime, "u": u, "inserted_at": at, "gamma": g,
            }),
        );
        let r = self.path[k].records.last_mut().expect("live m");
        r.phase = MPhase::Step5;
        r.s_prime = Some(self.stage);
        r.t_prime = Some(t_prime);
        r.u = Some(u);
        r.session_events_at_s_prime = Some(events);
        r.b_elements = b_elements;
        r.b_blocks = b_blocks;
        r.w_at_s_prime = w_at_s_prime;
        Ok(())
    }

    fn step5(&mut self, k: usize, t_double: u64) -> Result<(), TreeError> {
        let i = self.path[k].requirement;
        let w: Vec<u64> = self.w_members(i, self.stage).into_iter().filter(|&a| a < t_double).collect();
        let stage = self.stage;
        let r = self.path[k].records.last_mut().expect("live m");
        r.phase = MPhase::Step6;
        r.s_double = Some(stage);
        r.t_double = Some(t_double);
        r.w_at_s_double = w;
        let m = r.m;
        self.log.record(
            "step5",
            &json!({"stage": stage, "node": self.path[k].name(), "m": m, "t_double": t_double}),
        );
        if m < self.config.m_cap {
            self.step2(k, m + 1)
        } else {
            self.path[k].capped = true;
            self.log.record("cap", &json!({"stage": stage, "node": self.path[k].name(), "m": m}));
            Ok(())
        }
    }

    /// Step 6 for record `ri`: a semi-embedding of the session that keeps
    /// the blocks of `B_m` whole and fixes `A^{1,init}_m`.
    fn semi(&mut self, k: usize, ri: usize) -> Result<Option<SemiEmbedding>, TreeError> {
        let rec = &self.path[k].records[ri];
        let mut marked = Vec::with_capacity(rec.b_blocks.len());
        for &(lo, hi) in &rec.b_blocks {
            let positions: Vec<usize> = (lo..=hi)
                .map(|p| self.session.position(rec.b_elements[p as usize]).expect("placed"))
                .collect();
            let vals = self.f().prefix(hi + 1)?[lo as usize..].to_vec();
            marked.push(MarkedBlock {
                positions,
                shape: Block::from_values(lo, &vals).shape,
            });
        }
        let len = self.session.len();
        let problem = SemiProblem {
            len,
            marked,
            fixed_prefix: rec.init_len,
        };
        Ok(find_semi_embedding(&problem, self.f(), 2 * len as u64 + 1)?)
    }

    fn step7(&mut self, k: usize, ri: usize, xi: SemiEmbedding) -> Result<(), TreeError> {
        for r in self.path[k].records.clone() {
            let owner = self.path[k].owner(r.m);
            self.session.release(&owner);
        }
        let top = *xi.map.last().expect("nonempty session") as usize;
        let mut hit = vec![false; top + 1];
        for &v in &xi.map {
            hit[v as usize] = true;
        }
        let mut gaps = 0;
        for (t, &h) in hit.iter().enumerate() {
            if !h {
                if t < self.session.len() {
                    self.session.insert_before(t)?;
                } else {
                    self.session.append()?;
                }
                gaps += 1;
            }
        }
        self.fill_to_cut()?;
        let node = &self.path[k];
        let rec = &node.records[ri];
        let witness = StopWitness {
            requirement: node.requirement,
            address: address_string(&node.address),
            m: rec.m,
            x: rec.x,
            y: rec.y,
            s_prime: rec.s_prime.expect("Step 4 ran"),
            t_prime: rec.t_prime.expect("Step 4 ran"),
            u: rec.u.expect("Step 4 ran"),
            s_double: rec.s_double.expect("Step 5 ran"),
            t_double: rec.t_double.expect("Step 5 ran"),
            s_triple: self.stage,
            session_events_at_s_prime: rec.session_events_at_s_prime.expect("Step 4 ran"),
            w_at_s_prime: rec.w_at_s_prime.clone(),
            w_at_s_double: rec.w_at_s_double.clone(),
        };
        let m = rec.m;
        let owner = node.stop_owner();
        let name = node.name();
        let (first, last) = (self.session.element_at(0), *self.session.elements().last().expect("nonempty"));
        self.session.restrain(&owner, first, Some(last));
        let g = self.gamma(witness.code())?;
        self.log.record(
            "step7",
            &json!({"stage": self.stage, "node": name, "m": m, "gaps": gaps, "len": self.session.len(), "gamma": g}),
        );
        self.path[k].records[ri].phase = MPhase::Stopped;
        self.path[k].stop = Some(self.stops.len());
        self.stops.push(witness);
        Ok(())
    }

    /// Runs node `k` for the current stage; true when it acted (Step 4 or
    /// Step 7), which ends the stage's visits.
    fn visit(&mut self, k: usize) -> Result<bool, TreeError> {
        let node = &self.path[k];
        if node.stop.is_some() {
            return Ok(false);
        }
        if node.records.is_empty() {
            self.step2(k, 0)?;
            return Ok(false);
        }
        for ri in 0..self.path[k].records.len() {
            if self.path[k].records[ri].phase == MPhase::Step6 {
                if let Some(xi) = self.semi(k, ri)? {
                    // Lower-priority restraints are injured before the session changes.
                    self.discard_from(k + 1);
                    self.step7(k, ri, xi)?;
                    return Ok(true);
                }
            }
        }
        let node = &self.path[k];
        if node.capped {
            return Ok(false);
        }
        let i = node.requirement;
        let rec = node.records.last().expect("live m");
        let code = rec.code();
        match rec.phase {
            MPhase::Step3 if self.stage > rec.stage => {
                if let Some((t, u)) = self.equations(i, code, false, 0)? {
                    self.discard_from(k + 1);
                    self.step4(k, t, u)?;
                    return Ok(true);
                }
            }
            MPhase::Step5 if self.stage > rec.s_prime.expect("Step 4 ran") => {
                let lower = rec.t_prime.expect("Step 4 ran");
                if let Some((t, _)) = self.equations(i, code, true, lower)? {
                    self.step5(k, t)?;
                }
            }
            _ => {}
        }
        Ok(false)
    }

    fn discard_from(&mut self, k: usize) {
        for node in self.path.drain(k..).collect::<Vec<_>>() {
            for r in &node.records {
                self.session.release(&node.owner(r.m));
            }
            self.session.release(&node.stop_owner());
            self.log.record("initialize", &json!({"stage": self.stage, "node": node.name()}));
        }
    }

    /// Drops nodes whose address no longer matches their parents' outcomes.
    fn prune(&mut self) {
        for k in 1..self.path.len() {
            let want: Vec<Outcome> = self.path[..k].iter().map(StrategyNode::outcome).collect();
            if self.path[k].address != want {
                self.discard_from(k);
                break;
            }
        }
    }

    fn run_stage(&mut self, s: u64) -> Result<(), TreeError> {
        self.stage = s;
        let depth = self.triples.len().min(s as usize + 1);
        for k in 0..depth {
            let address: Vec<Outcome> = self.path[..k].iter().map(StrategyNode::outcome).collect();
            if self.path.len() > k && self.path[k].address != address {
                self.discard_from(k);
            }
            if self.path.len() == k {
                self.path.push(StrategyNode::new(k, address));
            }
            if self.visit(k)? {
                self.discard_from(k + 1);
                break;
            }
        }
        self.prune();

        for node in self.path.iter().filter(|n| n.stop.is_none()) {
            for r in node.records.iter().filter(|r| r.phase != MPhase::Stopped) {
                let g = gamma(&self.session, self.f(), r.code())?;
                self.log.record(
                    "marker",
                    &json!({"stage": s, "node": node.name(), "m": r.m, "phase": r.phase, "gamma": g}),
                );
            }
        }
        for i in 0..self.triples.len() {
            if let Opponent::Reactive { watch, element } = self.triples[i].w {
                if self.entered[i].is_none() && self.gamma(watch)? {
                    self.entered[i] = Some(s + 1);
                    self.log.record("w-enumerate", &json!({"stage": s + 1, "requirement": i, "element": element}));
                }
            }
        }

        self.fill_to_cut()?;
        let len = self.session.len() as u64;
        let next = self.cache.containing(len)?;
        for _ in 0..next.len() {
            self.session.append()?;
        }

        let g: Vec<Outcome> = self.path.iter().map(StrategyNode::outcome).collect();
        let names: Vec<String> = g.iter().map(Outcome::to_string).collect();
        self.log.record("path", &json!({"stage": s, "path": names}));
        self.trace.push(g);
        Ok(())
    }
}

fn precheck(f: &BlockFunction) -> Result<(), TreeError> {
    if f.cp(0).is_none() {
        return Err(TreeError::Precondition("cp_f is not available for this presentation".into()));
    }
    let mut cache = BlockCache::new(f.clone());
    if !cache.within(256)?.iter().any(|b| b.len() >= 2) {
        return Err(TreeError::Precondition("f is the identity on [0, 256)".into()));
    }
    Ok(())
}

/// Runs `config.stages` stages against `triples`. Requirement `i` is
/// handled by the node at depth `i` of the current path.
pub fn run_tree_construction(f: BlockFunction, triples: Vec<Triple>, config: TreeConfig) -> Result<TreeRun, TreeError> {
    precheck(&f)?;
    let n = triples.len();
    let mut state = TreeState {
        cache: BlockCache::new(f),
        triples,
        config,
        session: CopySession::new(),
        path: Vec::new(),
        stage: 0,
        entered: vec![None; n],
        stops: Vec::new(),
        trace: Vec::new(),
        log: EventLog::new(),
    };
    for s in 0..config.stages {
        state.run_stage(s)?;
    }
    let statuses = (0..n)
        .map(|i| match state.path.get(i) {
            Some(node) => node.status(),
            None => RequirementStatus::Waiting { step: 1, m: None },
        })
        .collect();
    let report = ConstructionReport {
        stages_run: config.stages,
        statuses,
        path_trace: state.trace.clone(),
        stops: state.stops.clone(),
        artifact: Artifact::Session {
            log: state.session.log_text(),
            len: state.session.len() as u64,
        },
        log: state.log.clone(),
    };
    Ok(TreeRun { state, report })
}

/// `g_s`: each node of the current path with its current outcome.
pub fn current_path(state: &TreeState) -> Vec<(String, Outcome)> {
    state.path.iter().map(|n| (address_string(&n.address), n.outcome())).collect()
}
