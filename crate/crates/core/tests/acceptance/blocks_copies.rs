use std::cell::Cell;

use serde_json::json;
use spectra::blocks::{decompose_prefix_partial, find_block, BlockFunction, BlockSpec, FnError};
use spectra::catalog::{lookup_table, standard};
use spectra::ce::CeSet;
use spectra::copies::{
    ce_encoded_copy, delta2_encoded_copy, marker_pair, schedule_copy_ops, ComputableCopy, CopyOracle,
};
use spectra::gen::{block_scramble, increasing_cycles_spec, random_block_spec, random_schedule, ScriptedDelta2};
use spectra::log::EventLog;
use spectra::notation::{shapiro_translate, Notation};
use spectra::recovery::{count_embeddings, recover_successor, SegmentSequence};
use spectra::structure::FiniteStructure;

use crate::oracle;

pub fn block_recovery(log: &mut EventLog) -> Result<String, String> {
    const N: u64 = 512;
    let mut checked = 0u64;
    for seed in 0..200u64 {
        let mut spec = random_block_spec(seed, 12, 160);
        spec.set_repeat(true);
        let f = BlockFunction::from_spec(spec);
        // A block ending near N may be cut short by the prefix, so the truth
        // is read off a table long enough to hold one more block.
        let vals = f.prefix(N + 12).map_err(|e| e.to_string())?;
        let truth = oracle::blocks_brute(&vals);
        if oracle::blocks(&vals) != truth {
            return Err(format!("seed {seed}: the two cut oracles disagree"));
        }
        let inside: Vec<(u64, u64)> = truth.into_iter().filter(|b| b.1 < N).collect();
        let (blocks, _) = decompose_prefix_partial(&f, N).map_err(|e| format!("seed {seed}: {e}"))?;
        let got: Vec<(u64, u64)> = blocks.iter().map(|b| (b.lo(), b.hi())).collect();
        if got[..inside.len()] != inside[..] {
            return Err(format!("seed {seed}: decomposition disagrees with the cut oracle"));
        }
        for b in &blocks[..inside.len()] {
            for x in b.lo()..=b.hi() {
                let found = find_block(&f, &f, x, 1 << 16).map_err(|e| format!("seed {seed}, x {x}: {e}"))?;
                if found != *b {
                    return Err(format!("seed {seed}, x {x}: found [{}, {}]", found.lo(), found.hi()));
                }
                checked += 1;
            }
        }
        log.record("specimen", &json!({"seed": seed, "blocks": inside.len(), "covered": inside.last().map(|b| b.1 + 1)}));
    }
    Ok(format!("{checked} positions over 200 specs agree"))
}

/// Exposes only `less` and `fimg`, counting each call.
struct Instrumented<'a> {
    copy: &'a ComputableCopy,
    less: Cell<u64>,
    fimg: Cell<u64>,
}

impl CopyOracle for Instrumented<'_> {
    fn less(&self, x: u64, y: u64) -> bool {
        self.less.set(self.less.get() + 1);
        self.copy.less(x, y)
    }

    fn fimg(&self, x: u64) -> Result<u64, FnError> {
        self.fimg.set(self.fimg.get() + 1);
        self.copy.fimg(x)
    }
}

/// Closed initial segments `[0, c)` with `2c ≤ n`, taken from the cut oracle.
fn segments(f: &BlockFunction, n: u64) -> Result<SegmentSequence, String> {
    let vals = f.prefix(n).map_err(|e| e.to_string())?;
    let segs: Vec<FiniteStructure> = oracle::blocks(&vals)
        .iter()
        .map(|&(_, hi)| hi + 1)
        .filter(|&c| 2 * c <= n)
        .map(|c| FiniteStructure::new(vals[..c as usize].iter().map(|&v| v as usize).collect()))
        .collect();
    Ok(SegmentSequence::new(segs))
}

pub fn successor_recovery(log: &mut EventLog) -> Result<String, String> {
    const N: u64 = 256;
    let mut answers = 0;
    for seed in 0..50u64 {
        let f = BlockFunction::from_spec(increasing_cycles_spec(seed, 40));
        let segs = segments(&f, N)?;
        for (j, b) in segs.iter().enumerate() {
            if count_embeddings(b, &f, N).map_err(|e| e.to_string())? != 1 {
                return Err(format!("seed {seed}: B_{j} is not unique below {N}"));
            }
        }
        let ops = random_schedule(seed, 160, 0.3);
        let copy = schedule_copy_ops(f, &ops).map_err(|e| e.to_string())?;
        let probe = Instrumented {
            copy: &copy,
            less: Cell::new(0),
            fimg: Cell::new(0),
        };
        for p in 0..50 {
            let x = copy.element_at(p);
            let got = recover_successor(&probe, &segs, x, 1024).map_err(|e| format!("seed {seed}, x {x}: {e}"))?;
            if got != copy.succ(x) {
                return Err(format!("seed {seed}: Succ({x}) = {} but recovered {got}", copy.succ(x)));
            }
            answers += 1;
        }
        log.record(
            "specimen",
            &json!({"seed": seed, "segments": segs.len(), "less": probe.less.get(), "fimg": probe.fimg.get()}),
        );
    }
    Ok(format!("{answers} successors recovered over 50 copies"))
}

pub fn ce_encoding(log: &mut EventLog) -> Result<String, String> {
    const BUDGET: u64 = 1000;
    let catalog = standard();
    let copy = ce_encoded_copy(&CeSet::Halting(catalog.clone()), BUDGET, 16);
    let mut members = 0;
    for (e, program) in catalog.iter().enumerate() {
        let e = e as u64;
        let direct = program.evaluate(e, BUDGET).value().is_some();
        let (a, b) = marker_pair(e);
        let separated = copy.succ(a) != b;
        log.record("marker", &json!({"e": e, "direct": direct, "separated": separated}));
        if direct != separated {
            return Err(format!("e = {e}: enumerated {direct}, separated {separated}"));
        }
        members += u64::from(direct);
    }
    Ok(format!("16 markers agree, {members} enumerated"))
}

const DELTA2_SPECS: [&str; 3] = [
    "type a fvals=0\ntype b fvals=1,0\nemit a x2\nemit b x1\nrepeat",
    "type a fvals=0\ntype b fvals=1,0\ntype c fvals=1,2,0\nemit b x1\nemit a x3\nemit c x1\nemit b x2\nrepeat",
    "type a fvals=0\ntype b fvals=1,0\ntype d fvals=0,0\nemit a x1\nemit d x1\nemit a x2\nemit b x1\nrepeat",
];

pub fn delta2_encoding(log: &mut EventLog) -> Result<String, String> {
    const PAIRS: u64 = 32;
    for seed in 0..20u64 {
        let spec = BlockSpec::parse(DELTA2_SPECS[seed as usize % DELTA2_SPECS.len()]).map_err(|e| e.to_string())?;
        let x = ScriptedDelta2::random(seed, PAIRS as usize, 3, 48);
        if x.flips.iter().any(|f| f.len() > 3) {
            return Err(format!("seed {seed}: more than three flips"));
        }
        let copy = delta2_encoded_copy(BlockFunction::from_spec(spec), &x, 64, PAIRS).map_err(|e| format!("seed {seed}: {e}"))?;
        let mut ones = 0;
        for e in 0..PAIRS {
            let swapped = copy.fimg(4 * e).map_err(|err| err.to_string())? == 4 * e + 2;
            if swapped != x.limit(e) {
                return Err(format!("seed {seed}, e {e}: limit {} but swapped {swapped}", x.limit(e)));
            }
            ones += u64::from(swapped);
        }
        log.record("specimen", &json!({"seed": seed, "ones": ones, "placed": copy.placed().len()}));
    }
    Ok("20 approximations encoded on all e < 32".into())
}

pub fn translation(log: &mut EventLog) -> Result<String, String> {
    const N: u64 = 128;
    const TABLE: usize = 160;
    for seed in 0..50u64 {
        let listing = block_scramble(seed, TABLE, 6);
        let mut index = vec![0u64; TABLE];
        for (k, &a) in listing.iter().enumerate() {
            index[a as usize] = k as u64;
        }
        let table: Vec<u64> = (0..TABLE)
            .map(|a| listing.get(index[a] as usize + 1).copied().unwrap_or(TABLE as u64))
            .collect();
        let succ = lookup_table(&table, 1);
        let sigma = Notation::from_listing(&listing);
        let g = shapiro_translate(&sigma, &succ, N, 1 << 20).map_err(|e| format!("seed {seed}: {e}"))?;
        for a in 0..N as usize {
            if g[a] != index[a] {
                return Err(format!("seed {seed}: g({a}) = {} but the scramble puts it at {}", g[a], index[a]));
            }
            let s = table[a];
            if s < N && g[s as usize] != g[a] + 1 {
                return Err(format!("seed {seed}: g(succ({a})) ≠ g({a}) + 1"));
            }
        }
        log.record("specimen", &json!({"seed": seed, "g_head": &g[..8]}));
    }
    Ok("50 scrambles translated on [0, 128)".into())
}
