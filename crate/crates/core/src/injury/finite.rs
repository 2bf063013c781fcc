//! The finite-injury construction of a block function whose `cp_f` differs
//! from every catalog program.

use serde::Serialize;
use serde_json::json;

use super::{Artifact, ConstructionReport, RequirementStatus};
use crate::blocks::{BlockFunction, BlockSpec};
use crate::log::EventLog;
use crate::machine::Program;
use crate::structure::FiniteStructure;

/// What the construction knew at the end of one stage, before the global
/// duplication step ran.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageRecord {
    pub stage: u64,
    /// `N_s`: length of the defined prefix.
    pub len: u64,
    /// Types of the blocks of `f↾N_s`, as indices into the spec.
    pub types: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PState {
    Fresh,
    Waiting { w: u64, since: u64 },
    Acted { w: u64 },
}

/// Last thing seen of one requirement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrategyTrace {
    pub w: Option<u64>,
    /// `φ_i(w_i)` if it halted at the last check.
    pub phi: Option<u64>,
    /// Step budget of the last check.
    pub budget: u64,
    pub acted: bool,
}

#[derive(Debug, Clone)]
pub struct FiniteInjuryRun {
    pub f: BlockFunction,
    /// `f` is defined and block-closed on `[0, len)`.
    pub len: u64,
    pub records: Vec<StageRecord>,
    pub strategies: Vec<StrategyTrace>,
    pub report: ConstructionReport,
}

fn longest_cycle(spec: &BlockSpec) -> usize {
    spec.types()
        .iter()
        .flat_map(|t| t.cycle_lengths())
        .max()
        .unwrap_or(0)
}

/// Runs `stages` stages against `catalog`, with `φ_i` evaluated for `s`
/// steps at stage `s`.
pub fn run_finite_injury(catalog: &[Program], stages: u64) -> FiniteInjuryRun {
    let mut spec = BlockSpec::new();
    spec.push_shape(FiniteStructure::new(vec![0]), 1);
    spec.push_shape(FiniteStructure::cycle(2), 1);
    let mut log = EventLog::new();
    let mut state = vec![PState::Fresh; catalog.len()];
    let mut traces = vec![
        StrategyTrace {
            w: None,
            phi: None,
            budget: 0,
            acted: false,
        };
        catalog.len()
    ];
    let mut records = Vec::new();

    for s in 1..=stages {
        for i in 0..catalog.len() {
            match state[i] {
                PState::Fresh => {
                    let l = (longest_cycle(&spec) + 1).max(2);
                    let w = spec.emitted_len();
                    spec.push_shape(FiniteStructure::cycle(l), 1);
                    state[i] = PState::Waiting { w, since: s };
                    traces[i] = StrategyTrace {
                        w: Some(w),
                        phi: None,
                        budget: 0,
                        acted: false,
                    };
                    log.record("step1", &json!({"stage": s, "requirement": i, "w": w, "l": l}));
                }
                PState::Waiting { w, since } if s > since => {
                    let got = catalog[i].evaluate(w, s).value();
                    traces[i].phi = got;
                    traces[i].budget = s;
                    if got != Some(1) {
                        continue;
                    }
                    let x = spec.emitted_len();
                    assert_eq!(spec.locate(w).map(|(start, _)| start), Some(w), "w_i starts its block");
                    let mut fvals: Vec<usize> = (w..x).map(|y| (spec.value(y) - w) as usize).collect();
                    fvals.push(0);
                    spec.truncate(w);
                    spec.push_shape(FiniteStructure::new(fvals), 1);
                    state[i] = PState::Acted { w };
                    traces[i].acted = true;
                    log.record("step3", &json!({"stage": s, "requirement": i, "w": w, "x": x}));
                    for (j, st) in state.iter_mut().enumerate().skip(i + 1) {
                        if *st != PState::Fresh {
                            *st = PState::Fresh;
                            log.record("initialize", &json!({"stage": s, "requirement": j}));
                        }
                    }
                    break;
                }
                _ => {}
            }
        }
        let types = spec.present_types();
        let len = spec.emitted_len();
        log.record("r-copies", &json!({"stage": s, "len": len, "types": types}));
        for &ty in &types {
            spec.push(ty, 2);
        }
        records.push(StageRecord { stage: s, len, types });
    }

    let statuses = state
        .iter()
        .map(|st| match *st {
            PState::Acted { w } => RequirementStatus::SatisfiedVia {
                outcome: "step-3".into(),
                witness: w,
            },
            PState::Waiting { .. } => RequirementStatus::Waiting { step: 2, m: None },
            PState::Fresh => RequirementStatus::Waiting { step: 1, m: None },
        })
        .collect();
    let len = spec.emitted_len();
    let report = ConstructionReport {
        stages_run: stages,
        statuses,
        path_trace: Vec::new(),
        stops: Vec::new(),
        artifact: Artifact::FPrefix {
            spec: spec.to_string(),
            len,
        },
        log,
    };
    FiniteInjuryRun {
        f: BlockFunction::from_spec(spec),
        len,
        records,
        strategies: traces,
        report,
    }
}
