//! Command implementations. Each writes records into the log and lines
//! into the summary, and maps failures onto exit codes.

use std::path::{Path, PathBuf};

use serde_json::json;

use super::{read, Cli, CliError, Command, FnSource, KindArg};
use crate::blocks::{classify_prefix, decompose_prefix, BlockFunction, BlockSpec, DecomposeFailure};
use crate::catalog;
use crate::ce::CeSet;
use crate::copies::{
    ce_encoded_copy, delta2_encoded_copy, marker_pair, schedule_copy, schedule_copy_ops, ComputableCopy, CopyOracle,
    Delta2Error, ScheduleError, ScheduleOp,
};
use crate::gen::ScriptedDelta2;
use crate::log::EventLog;
use crate::machine::Program;
use crate::notation::{
    everywhere_computable_classifier, shapiro_translate, verify_acceptability, Acceptability, ClassKind, Notation,
    NotationError, TranslateError,
};
use crate::recovery::{recover_successor_traced, unique_segments, RecoveryError};
use crate::structure::FiniteStructure;

pub(super) fn dispatch(cli: &Cli, log: &mut EventLog, summary: &mut Vec<String>) -> Result<(), CliError> {
    match &cli.command {
        Command::Decompose { source, n } => decompose(source, *n, log, summary),
        Command::Recover {
            spec,
            schedule,
            stages,
            x,
            budget,
            segments,
            window,
        } => recover(
            &RecoverArgs {
                spec,
                schedule: schedule.as_deref(),
                stages: *stages,
                x: *x,
                budget: *budget,
                segments: *segments,
                window: *window,
            },
            log,
            summary,
        ),
        Command::Injury { .. } => super::injury::injury(cli, log, summary),
        Command::Classify { source, n, kind } => classify(source, *n, *kind, log, summary),
        Command::Translate {
            notation,
            program,
            n,
            budget,
        } => translate(notation, program.as_deref(), *n, *budget, log, summary),
        Command::Encode {
            program,
            budget,
            spec,
            pairs,
        } => match spec {
            Some(spec) => encode_delta2(spec, cli.seed, *budget, *pairs, log, summary),
            None => encode_ce(program, *budget, log, summary),
        },
    }
}

pub(super) fn load_spec(path: &Path) -> Result<BlockSpec, CliError> {
    BlockSpec::parse(&read(path)?).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}

pub(super) fn load_program(path: &Path) -> Result<Program, CliError> {
    Program::parse(&read(path)?).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}

/// Programs in index order, or the standard catalog when none are given.
pub(super) fn load_catalog(paths: &[PathBuf]) -> Result<Vec<Program>, CliError> {
    if paths.is_empty() {
        return Ok(catalog::standard());
    }
    paths
        .iter()
        .enumerate()
        .map(|(i, p)| load_program(p).map(|q| q.with_index(i)))
        .collect()
}

fn load_function(source: &FnSource) -> Result<BlockFunction, CliError> {
    match (&source.spec, &source.program) {
        (Some(spec), _) => Ok(BlockFunction::from_spec(load_spec(spec)?)),
        (None, Some(p)) => Ok(BlockFunction::from_program(load_program(p)?, source.budget)),
        (None, None) => Err(CliError::config("one of --spec or --program is required")),
    }
}

fn decompose(source: &FnSource, n: u64, log: &mut EventLog, summary: &mut Vec<String>) -> Result<(), CliError> {
    let f = load_function(source)?;
    let blocks = decompose_prefix(&f, n).map_err(|e| match e {
        DecomposeFailure::EscapesPrefix { .. } => CliError::structure(e.to_string()),
        DecomposeFailure::NoMinimalClosure { .. } => CliError::exhausted(e.to_string()),
    })?;
    let mut types: Vec<FiniteStructure> = Vec::new();
    let mut counts: Vec<u64> = Vec::new();
    for b in &blocks {
        let ty = match types.iter().position(|t| *t == b.shape) {
            Some(t) => t,
            None => {
                types.push(b.shape.clone());
                counts.push(0);
                types.len() - 1
            }
        };
        counts[ty] += 1;
        log.record(
            "block",
            &json!({"lo": b.lo(), "hi": b.hi(), "type": ty, "fvals": b.shape.fvals()}),
        );
    }
    for (ty, (shape, count)) in types.iter().zip(&counts).enumerate() {
        log.record("type", &json!({"type": ty, "fvals": shape.fvals(), "count": count}));
    }
    summary.push(format!("{} blocks of {} types on [0, {n})", blocks.len(), types.len()));
    Ok(())
}

struct RecoverArgs<'a> {
    spec: &'a Path,
    schedule: Option<&'a Path>,
    stages: u64,
    x: u64,
    budget: u64,
    segments: usize,
    window: u64,
}

/// `append` and `insert <k>` lines; blank lines and `#` comments ignored.
pub fn parse_schedule_ops(text: &str) -> Option<Vec<ScheduleOp>> {
    let mut ops = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        match (words.next(), words.next(), words.next()) {
            (Some("append"), None, None) => ops.push(ScheduleOp::Append),
            (Some("insert"), Some(k), None) => ops.push(ScheduleOp::InsertAt(k.parse().ok()?)),
            _ => return None,
        }
    }
    Some(ops)
}

fn build_copy(f: BlockFunction, schedule: Option<&Path>, stages: u64) -> Result<ComputableCopy, CliError> {
    let result = match schedule {
        None => schedule_copy_ops(f, &[]),
        Some(path) => {
            let text = read(path)?;
            match parse_schedule_ops(&text) {
                Some(ops) => schedule_copy_ops(f, &ops),
                None => {
                    let p = Program::parse(&text).map_err(|e| {
                        CliError::config(format!("{}: neither a schedule nor a program: {e}", path.display()))
                    })?;
                    schedule_copy(f, &p, stages, 10_000)
                }
            }
        }
    };
    result.map_err(|e| match e {
        ScheduleError::Exhausted { .. } => CliError::exhausted(e.to_string()),
        _ => CliError::structure(e.to_string()),
    })
}

fn recover(args: &RecoverArgs<'_>, log: &mut EventLog, summary: &mut Vec<String>) -> Result<(), CliError> {
    let f = BlockFunction::from_spec(load_spec(args.spec)?);
    let segs = unique_segments(&f, args.segments, args.window)
        .map_err(|e| CliError::exhausted(e.to_string()))?
        .ok_or_else(|| {
            CliError::exhausted(format!(
                "fewer than {} uniquely embedded segments below {}",
                args.segments, args.window
            ))
        })?;
    for (j, b) in segs.iter().enumerate() {
        log.record("segment", &json!({"j": j, "fvals": b.fvals()}));
    }
    let copy = build_copy(f, args.schedule, args.stages)?;
    let mut events = Vec::new();
    let result = recover_successor_traced(&copy, &segs, args.x, args.budget, &mut |e| events.push(e));
    for e in &events {
        log.record("recover", e);
    }
    match result {
        Ok(s) => {
            summary.push(format!("Succ_A({}) = {s}", args.x));
            Ok(())
        }
        Err(RecoveryError::Exhausted) => Err(CliError::exhausted(format!(
            "no answer for {} within {} reveals",
            args.x, args.budget
        ))),
    }
}

fn classify(source: &FnSource, n: u64, kind: KindArg, log: &mut EventLog, summary: &mut Vec<String>) -> Result<(), CliError> {
    match (&source.spec, &source.program) {
        (Some(_), _) => {
            let f = load_function(source)?;
            let c = classify_prefix(&f, n).map_err(|e| CliError::exhausted(e.to_string()))?;
            summary.push(format!(
                "almost constant: {}, almost identity: {}, block: {}, quasi-block: {}",
                c.almost_constant, c.almost_identity, c.block_on_prefix, c.quasi_block_on_prefix
            ));
            log.record("classification", &c);
        }
        (None, Some(p)) => {
            let program = load_program(p)?;
            let kind = match kind {
                KindArg::Function => ClassKind::Function,
                KindArg::Set => ClassKind::Set,
            };
            let v = everywhere_computable_classifier(kind, &program, n, source.budget, None)
                .map_err(|e| CliError::exhausted(e.to_string()))?;
            summary.push(format!("{v:?}"));
            log.record("verdict", &v);
        }
        (None, None) => return Err(CliError::config("one of --spec or --program is required")),
    }
    Ok(())
}

fn translate(
    bundle: &Path,
    succ: Option<&Path>,
    n: u64,
    budget: u64,
    log: &mut EventLog,
    summary: &mut Vec<String>,
) -> Result<(), CliError> {
    let sigma: Notation = read(bundle)?
        .parse()
        .map_err(|e| CliError::config(format!("{}: {e}", bundle.display())))?;
    let succ = match succ {
        Some(p) => load_program(p)?,
        None => catalog::successor(),
    };
    let check = verify_acceptability(&sigma, &succ, n, budget);
    log.record("acceptability", &check);
    match check {
        Acceptability::Refuted { a } => {
            return Err(CliError::structure(format!("successor program is wrong at {a}")))
        }
        Acceptability::Exhausted { a } => return Err(CliError::exhausted(NotationError::Exhausted(a).to_string())),
        Acceptability::ConfirmedOnPrefix { .. } => {}
    }
    let g = shapiro_translate(&sigma, &succ, n, budget).map_err(|e| match e {
        TranslateError::RefutedStructure { .. } => CliError::structure(e.to_string()),
        TranslateError::Exhausted(_) => CliError::exhausted(e.to_string()),
    })?;
    summary.push(format!("translated {} elements", g.len()));
    log.record("translation", &json!({"n": n, "g": g}));
    Ok(())
}

fn encode_ce(programs: &[PathBuf], budget: u64, log: &mut EventLog, summary: &mut Vec<String>) -> Result<(), CliError> {
    let catalog = load_catalog(programs)?;
    let markers = catalog.len() as u64;
    let w = CeSet::Halting(catalog);
    let members = w.enumerate(budget);
    let copy = ce_encoded_copy(&w, budget, markers);
    for e in 0..markers {
        let (a, b) = marker_pair(e);
        log.record(
            "marker",
            &json!({"e": e, "a": a, "b": b, "adjacent": copy.succ(a) == b, "enumerated": members.contains(&e)}),
        );
    }
    log.record("copy", &json!({"placed": copy.placed()}));
    summary.push(format!("{} of {markers} markers separated by stage {budget}", members.len()));
    Ok(())
}

fn encode_delta2(
    spec: &Path,
    seed: u64,
    budget: u64,
    pairs: u64,
    log: &mut EventLog,
    summary: &mut Vec<String>,
) -> Result<(), CliError> {
    let f = BlockFunction::from_spec(load_spec(spec)?);
    let x = ScriptedDelta2::random(seed, pairs as usize, 3, budget.max(2));
    let copy = delta2_encoded_copy(f, &x, budget, pairs).map_err(|e| match e {
        Delta2Error::Deficient { .. } => CliError::structure(e.to_string()),
        Delta2Error::Function(_) => CliError::exhausted(e.to_string()),
    })?;
    let mut agree = 0;
    for e in 0..pairs.min(budget + 1) {
        let swapped = copy.fimg(4 * e).map_err(|err| CliError::exhausted(err.to_string()))? == 4 * e + 2;
        let limit = x.limit(e);
        agree += u64::from(swapped == limit);
        log.record("pair", &json!({"e": e, "limit": limit, "swapped": swapped}));
    }
    log.record("copy", &json!({"placed": copy.placed()}));
    summary.push(format!("{agree} pairs encode their limit"));
    Ok(())
}
