//! `spectra injury`.

use serde_json::json;

use super::commands::{load_catalog, load_spec};
use super::config::{InjuryConfig, InjuryMode, OpponentKind};
use super::{Cli, CliError, Command};
use crate::blocks::{decompose_prefix, BlockFunction};
use crate::gen::random_block_spec;
use crate::injury::{
    cooperating_triple, run_finite_injury, run_tree_construction, silent_triple, static_triple, verify_stop_witness,
    TreeConfig, TreeError, Triple,
};
use crate::log::EventLog;

const DEFAULT_FINITE_STAGES: u64 = 200;
const DEFAULT_TREE_STAGES: u64 = 64;

/// Config file values with command-line flags laid over them.
fn merged(cli: &Cli) -> Result<InjuryConfig, CliError> {
    let Command::Injury {
        config,
        mode,
        spec,
        program,
        stages,
        m_cap,
        opponent,
        case_a,
    } = &cli.command
    else {
        unreachable!("dispatched on injury");
    };
    let mut c = match config {
        Some(path) => InjuryConfig::load(path)?,
        None => InjuryConfig::default(),
    };
    if let Some(m) = mode {
        c.mode = *m;
    }
    if spec.is_some() {
        c.spec = spec.clone();
    }
    if !program.is_empty() {
        c.catalog = program.clone();
    }
    c.stages = stages.or(c.stages);
    c.m_cap = m_cap.or(c.m_cap);
    if !opponent.is_empty() {
        c.opponents = opponent.clone();
    }
    c.case_a |= *case_a;
    if c.seed.is_none() && cli.seed != 0 {
        c.seed = Some(cli.seed);
    }
    Ok(c)
}

pub(super) fn injury(cli: &Cli, log: &mut EventLog, summary: &mut Vec<String>) -> Result<(), CliError> {
    let c = merged(cli)?;
    match c.mode {
        InjuryMode::Finite => finite(&c, log, summary),
        InjuryMode::Tree => tree(&c, log, summary),
    }
}

fn finite(c: &InjuryConfig, log: &mut EventLog, summary: &mut Vec<String>) -> Result<(), CliError> {
    let catalog = load_catalog(&c.catalog)?;
    let stages = c.stages.unwrap_or(DEFAULT_FINITE_STAGES);
    let run = run_finite_injury(&catalog, stages);
    log.extend(run.report.log.clone());
    for r in &run.records {
        log.record("stage-record", r);
    }
    for (i, t) in run.strategies.iter().enumerate() {
        log.record("strategy", &json!({"requirement": i, "trace": t}));
    }
    let blocks = decompose_prefix(&run.f, run.len).map_err(|e| CliError::structure(e.to_string()))?;
    log.record("check", &json!({"len": run.len, "blocks": blocks.len(), "decomposes": true}));
    log.record("report", &run.report);
    let acted = run.strategies.iter().filter(|t| t.acted).count();
    summary.push(format!(
        "{stages} stages, f defined on [0, {}), {acted} of {} requirements acted",
        run.len,
        catalog.len()
    ));
    Ok(())
}

fn tree_function(c: &InjuryConfig) -> Result<BlockFunction, CliError> {
    let spec = match &c.spec {
        Some(path) => load_spec(path)?,
        None => {
            let mut spec = random_block_spec(c.seed.unwrap_or(0), 4, 16);
            spec.set_repeat(true);
            spec
        }
    };
    Ok(BlockFunction::from_spec(spec))
}

fn tree_error(e: TreeError) -> CliError {
    match e {
        TreeError::Function(_) => CliError::exhausted(e.to_string()),
        _ => CliError::structure(e.to_string()),
    }
}

fn tree(c: &InjuryConfig, log: &mut EventLog, summary: &mut Vec<String>) -> Result<(), CliError> {
    let f = tree_function(c)?;
    let opponents = if c.opponents.is_empty() {
        vec![OpponentKind::Cooperating]
    } else {
        c.opponents.clone()
    };
    let triples = opponents
        .iter()
        .map(|o| match o {
            OpponentKind::Cooperating => cooperating_triple(&f, c.case_a),
            OpponentKind::Static => static_triple(&f, c.case_a),
            OpponentKind::Silent => Ok(silent_triple()),
        })
        .collect::<Result<Vec<Triple>, _>>()
        .map_err(tree_error)?;
    let mut config = TreeConfig::new(c.stages.unwrap_or(DEFAULT_TREE_STAGES));
    if let Some(m) = c.m_cap {
        config.m_cap = m;
    }
    config.case_a = c.case_a;
    let run = run_tree_construction(f, triples, config).map_err(tree_error)?;
    log.extend(run.report.log.clone());
    let mut verified = 0;
    for w in &run.report.stops {
        let check = verify_stop_witness(w, run.state.session(), run.state.function(), &run.state.triples()[w.requirement]);
        verified += usize::from(check.is_verified());
        log.record("stop-check", &json!({"requirement": w.requirement, "check": check}));
    }
    log.record("report", &run.report);
    let outcomes: Vec<String> = run.state.path().iter().map(|n| n.outcome().to_string()).collect();
    summary.push(format!(
        "{} stages, path [{}], {verified}/{} stops verified",
        config.stages,
        outcomes.join(", "),
        run.report.stops.len()
    ));
    Ok(())
}
