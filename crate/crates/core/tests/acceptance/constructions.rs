use rand::Rng;
use serde_json::{json, Value};
use spectra::blocks::{decompose_prefix, BlockFunction, BlockSpec};
use spectra::catalog::standard;
use spectra::ce::CeSet;
use spectra::copies::{
    ce_encoded_copy, delta2_encoded_copy, schedule_copy_ops, standard_copy, ComputableCopy, CopySession,
};
use spectra::gen::{increasing_cycles_spec, random_block_spec, random_schedule, rng, ScriptedDelta2};
use spectra::injury::{
    cooperating_triple, run_finite_injury, run_tree_construction, silent_triple, static_triple, verify_stop_witness,
    Outcome, TreeConfig, TreeRun, Triple,
};
use spectra::log::EventLog;
use spectra::recovery::{find_semi_embedding, verify_semi_embedding, MarkedBlock, SemiProblem};
use spectra::structure::FiniteStructure;

use crate::oracle;

pub fn finite_injury(log: &mut EventLog) -> Result<String, String> {
    const STAGES: u64 = 200;
    let catalog = standard();
    let run = run_finite_injury(&catalog, STAGES);
    decompose_prefix(&run.f, run.len).map_err(|e| format!("prefix of length {}: {e}", run.len))?;
    let vals = run.f.prefix(run.len).map_err(|e| e.to_string())?;
    let blocks = oracle::blocks(&vals);
    if blocks.last().map(|b| b.1 + 1) != Some(run.len) {
        return Err("the prefix does not end on a cut".into());
    }

    let mut escaped = 0;
    for (i, t) in run.strategies.iter().enumerate() {
        let Some(w) = t.w else { continue };
        let Some(phi) = catalog[i].evaluate(w, STAGES).value() else { continue };
        let cp = oracle::preimage_count(&vals, w);
        log.record("requirement", &json!({"i": i, "w": w, "phi": phi, "cp": cp}));
        if cp == phi {
            return Err(format!("φ_{i}({w}) = {phi} = cp_f({w})"));
        }
        escaped += 1;
    }

    // A Step-3 merge can absorb later copies of a type into one larger
    // block, so occurrences are counted as f-closed copies, not blocks.
    let spec = run.f.spec().ok_or("the constructed f has no spec")?;
    for r in &run.records {
        for &ty in &r.types {
            let shape: Vec<u64> = spec.types()[ty].fvals().iter().map(|&v| v as u64).collect();
            let later = oracle::closed_occurrences(&vals, &shape, r.len, 2);
            if later < 2 {
                return Err(format!("stage {}: type {ty} occurs {later} times after {}", r.stage, r.len));
            }
        }
    }
    log.record("prefix", &json!({"len": run.len, "blocks": blocks.len(), "types": spec.types().len()}));
    Ok(format!(
        "f on [0, {}) decomposes, {escaped} halting φ_i(w_i) differ from cp_f, {} stage records duplicated",
        run.len,
        run.records.len()
    ))
}

fn alternating() -> BlockFunction {
    BlockFunction::from_spec(BlockSpec::parse("type a fvals=0\ntype b fvals=1,0\nemit a x1\nemit b x1\nrepeat").unwrap())
}

fn mixed() -> BlockFunction {
    BlockFunction::from_spec(
        BlockSpec::parse("type a fvals=0\ntype b fvals=1,0\ntype c fvals=1,2,0\nemit a x1\nemit b x1\nemit a x1\nemit c x1\nrepeat")
            .unwrap(),
    )
}

/// Marker restraints read back from the run log: while waiting at Step 3
/// the pair is not an `f_A`-edge, and from Step 5 on it is.
fn markers_respect_restraint(run: &TreeRun) -> Result<usize, String> {
    let mut seen = 0;
    for line in run.report.log.lines() {
        let v: Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
        if v["kind"] != "marker" {
            continue;
        }
        let want = match v["phase"].as_str() {
            Some("step3") => false,
            Some("step5") | Some("step6") => true,
            _ => continue,
        };
        if v["gamma"].as_bool() != Some(want) {
            return Err(format!("marker restraint broken: {line}"));
        }
        seen += 1;
    }
    Ok(seen)
}

pub fn tree_integrity(log: &mut EventLog) -> Result<String, String> {
    let mut stops = 0;
    for (name, f) in [("alternating", alternating()), ("mixed", mixed())] {
        let t = cooperating_triple(&f, false).map_err(|e| e.to_string())?;
        let run = run_tree_construction(f.clone(), vec![t.clone()], TreeConfig::new(500)).map_err(|e| e.to_string())?;
        let w = run.report.stops.first().ok_or(format!("{name}: no stop in 500 stages"))?;
        // Verification sees only the logged session, the witness and the triple.
        let session = CopySession::replay(&run.state.session().log_text()).map_err(|e| e.to_string())?;
        let check = verify_stop_witness(w, &session, &f, &t);
        if !check.is_verified() {
            return Err(format!("{name}: {check:?}"));
        }
        if run.state.path()[0].outcome() != Outcome::Stop {
            return Err(format!("{name}: the stopped node left the path"));
        }
        log.record("stop", &json!({"f": name, "stage": w.s_triple, "check": check}));
        stops += 1;
    }

    let mut markers = 0;
    for (name, f) in [("alternating", alternating()), ("mixed", mixed())] {
        let opponents: [(&str, Triple); 2] = [
            ("static", static_triple(&f, false).map_err(|e| e.to_string())?),
            ("silent", silent_triple()),
        ];
        for (kind, t) in opponents {
            let run = run_tree_construction(f.clone(), vec![t], TreeConfig::new(120)).map_err(|e| e.to_string())?;
            let last = run.report.path_trace.last().and_then(|g| g.first()).copied();
            if !matches!(last, Some(Outcome::W(_)) | Some(Outcome::WPrime(_))) {
                return Err(format!("{name}/{kind}: trace ends in {last:?}"));
            }
            let seen = markers_respect_restraint(&run)?;
            markers += seen;
            log.record("wait", &json!({"f": name, "opponent": kind, "outcome": last.map(|o| o.to_string()), "markers": seen}));
        }
    }
    Ok(format!("{stops} cooperating runs stop and verify, {markers} marker observations respect restraints"))
}

/// Block `lo..=hi` of the cut oracle, if one starts at `lo`.
fn block_at(blocks: &[(u64, u64)], lo: u64) -> Option<(u64, u64)> {
    blocks.iter().copied().find(|b| b.0 == lo)
}

fn exhaustive(problem: &SemiProblem, vals: &[u64], blocks: &[(u64, u64)], bound: u64, normalized: bool) -> bool {
    let mut ok = |map: &[u64], _complete: bool| {
        let p = map.len() - 1;
        if normalized && p < problem.fixed_prefix && map[p] != p as u64 {
            return false;
        }
        for b in &problem.marked {
            if *b.positions.last().unwrap() != p {
                continue;
            }
            let lo = map[b.positions[0]];
            let consecutive = b.positions.iter().enumerate().all(|(k, &q)| map[q] == lo + k as u64);
            let fits = consecutive
                && block_at(blocks, lo).is_some_and(|(_, hi)| {
                    hi - lo + 1 == b.shape.size() as u64
                        && oracle::shape(vals, lo, hi)
                            .iter()
                            .zip(b.shape.fvals())
                            .all(|(&v, &w)| v == w as u64)
                });
            if !fits {
                return false;
            }
        }
        true
    };
    oracle::increasing_maps(problem.len, bound, &mut ok) > 0
}

/// A session built from blocks of `f`: the first block is the fixed
/// prefix, and each later chosen block may be preceded by unmarked elements.
fn semi_problem(seed: u64, blocks: &[(u64, u64)], vals: &[u64]) -> SemiProblem {
    let mut r = rng(seed);
    let mut marked = Vec::new();
    let mut len = 0usize;
    let mut next_block = 0usize;
    let take = r.gen_range(1..=4);
    for k in 0..take {
        let gap = if k == 0 { 0 } else { r.gen_range(0..=2) };
        len += gap;
        next_block += if k == 0 { 0 } else { r.gen_range(1..=3) };
        let (lo, hi) = blocks[next_block];
        let shape = FiniteStructure::new(oracle::shape(vals, lo, hi).iter().map(|&v| v as usize).collect());
        let size = shape.size();
        if len + size > 10 {
            break;
        }
        marked.push(MarkedBlock {
            positions: (len..len + size).collect(),
            shape,
        });
        len += size;
    }
    let fixed_prefix = marked[0].positions.len();
    SemiProblem { len, marked, fixed_prefix }
}

pub fn semi_embeddings(log: &mut EventLog) -> Result<String, String> {
    const N: u64 = 1000;
    let (mut solvable, mut returned) = (0, 0);
    for seed in 0..150u64 {
        let mut spec = random_block_spec(seed, 3, 24);
        spec.set_repeat(true);
        let f = BlockFunction::from_spec(spec);
        let vals = f.prefix(64).map_err(|e| e.to_string())?;
        let blocks = oracle::blocks(&vals);
        let problem = semi_problem(seed, &blocks, &vals);
        let bound = N.min(2 * problem.len as u64 + 1);
        let any = exhaustive(&problem, &vals, &blocks, bound, false);
        let normal = exhaustive(&problem, &vals, &blocks, bound, true);
        let got = find_semi_embedding(&problem, &f, N).map_err(|e| e.to_string())?;
        if let Some(e) = &got {
            verify_semi_embedding(e, &problem, &f, N, true).map_err(|v| format!("seed {seed}: {v}"))?;
            if e.map.iter().any(|&v| v >= bound) {
                return Err(format!("seed {seed}: image outside [0, {bound})"));
            }
            returned += 1;
        }
        if any && got.is_none() {
            return Err(format!("seed {seed}: a semi-embedding exists but none satisfying (∗) was found"));
        }
        if normal != got.is_some() {
            return Err(format!("seed {seed}: search says {}, exhaustive says {normal}", got.is_some()));
        }
        solvable += u64::from(any);
        log.record("problem", &json!({"seed": seed, "len": problem.len, "any": any, "found": got.map(|e| e.map)}));
    }
    Ok(format!("150 problems, {solvable} solvable, {returned} embeddings verified"))
}

fn check_order(name: &str, copy: &ComputableCopy) -> Result<(), String> {
    const WINDOW: u64 = 200;
    for p in 0..WINDOW {
        let x = copy.element_at(p);
        let count = oracle::predecessor_count(copy, x, WINDOW);
        if count != p {
            return Err(format!("{name}: element {x} at position {p} has {count} predecessors"));
        }
    }
    Ok(())
}

pub fn order_type(log: &mut EventLog) -> Result<String, String> {
    let mut copies: Vec<(String, ComputableCopy)> = Vec::new();
    for seed in 0..8u64 {
        let f = BlockFunction::from_spec(increasing_cycles_spec(seed, 30));
        copies.push((format!("standard/{seed}"), standard_copy(f.clone())));
        let ops = random_schedule(seed, 240, 0.4);
        copies.push((format!("schedule/{seed}"), schedule_copy_ops(f, &ops).map_err(|e| e.to_string())?));
        let x = ScriptedDelta2::random(seed, 32, 3, 48);
        let g = BlockFunction::from_spec(BlockSpec::parse("type a fvals=0\ntype b fvals=1,0\nemit a x2\nemit b x1\nrepeat").unwrap());
        copies.push((format!("delta2/{seed}"), delta2_encoded_copy(g, &x, 64, 32).map_err(|e| e.to_string())?));
    }
    copies.push(("ce".into(), ce_encoded_copy(&CeSet::Halting(standard()), 1000, 16)));
    for (name, f) in [("alternating", alternating()), ("mixed", mixed())] {
        let triples = vec![
            cooperating_triple(&f, false).map_err(|e| e.to_string())?,
            static_triple(&f, false).map_err(|e| e.to_string())?,
        ];
        let run = run_tree_construction(f.clone(), triples, TreeConfig::new(150)).map_err(|e| e.to_string())?;
        copies.push((format!("tree/{name}"), run.state.session().to_copy(f)));
    }
    for (name, copy) in &copies {
        check_order(name, copy)?;
        log.record("copy", &json!({"name": name, "placed": copy.placed().len()}));
    }
    Ok(format!("{} copies have correct predecessor counts on 200 elements", copies.len()))
}
