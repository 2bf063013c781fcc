//! Preimage closures and block recovery driven by `cp_f`.

use std::collections::{BTreeSet, HashMap};

use super::{Block, BlockError, BlockFunction, CpOracle};

/// Largest accumulated set `find_block` builds before giving up.
pub const DEFAULT_CEILING: usize = 1 << 16;

/// Incremental view of `f` that evaluates `f(0), f(1), …` in order and keeps
/// an inverse index, so preimage searches are shared between queries.
///
/// The budget counts evaluations of `f`.
pub struct Scanner<'a> {
    f: &'a BlockFunction,
    cp: &'a dyn CpOracle,
    values: Vec<u64>,
    inverse: HashMap<u64, Vec<u64>>,
    // reach_max[z] = max over w ≤ z of the farthest point joined to w by an edge.
    reach_max: Vec<u64>,
    budget: u64,
}

impl<'a> Scanner<'a> {
    pub fn new(f: &'a BlockFunction, cp: &'a dyn CpOracle, budget: u64) -> Self {
        Scanner {
            f,
            cp,
            values: Vec::new(),
            inverse: HashMap::new(),
            reach_max: Vec::new(),
            budget,
        }
    }

    /// Evaluations performed so far.
    pub fn evaluations(&self) -> u64 {
        self.values.len() as u64
    }

    /// Raises the evaluation budget.
    pub fn grant(&mut self, extra: u64) {
        self.budget = self.budget.saturating_add(extra);
    }

    fn step(&mut self) -> Result<(), BlockError> {
        if self.values.len() as u64 >= self.budget {
            return Err(BlockError::Exhausted);
        }
        let x = self.values.len() as u64;
        let v = self.f.value(x)?;
        self.values.push(v);
        self.inverse.entry(v).or_default().push(x);
        Ok(())
    }

    pub fn value(&mut self, x: u64) -> Result<u64, BlockError> {
        while self.values.len() as u64 <= x {
            self.step()?;
        }
        Ok(self.values[x as usize])
    }

    /// All of `f⁻¹(y)`, found by scanning upward until `cp_f(y)` of them turn up.
    pub fn preimages(&mut self, y: u64) -> Result<Vec<u64>, BlockError> {
        let want = self.cp.cp(y).ok_or(BlockError::Exhausted)?;
        loop {
            let have = self.inverse.get(&y).map_or(0, Vec::len) as u64;
            if have >= want {
                return Ok(self.inverse.get(&y).cloned().unwrap_or_default());
            }
            self.step()?;
        }
    }

    /// `P_f(x)`: the least `f⁻¹`-closed set containing `x`.
    pub fn preimage_closure(&mut self, x: u64) -> Result<BTreeSet<u64>, BlockError> {
        let mut out = BTreeSet::new();
        let mut work = vec![x];
        out.insert(x);
        while let Some(y) = work.pop() {
            for p in self.preimages(y)? {
                if out.insert(p) {
                    work.push(p);
                }
            }
        }
        Ok(out)
    }

    /// Whether no edge of `f` joins `[0, c)` to `[c, ∞)`.
    pub fn is_cut(&mut self, c: u64) -> Result<bool, BlockError> {
        if c == 0 {
            return Ok(true);
        }
        while (self.reach_max.len() as u64) < c {
            let z = self.reach_max.len() as u64;
            let mut reach = self.value(z)?.max(z);
            for p in self.preimages(z)? {
                reach = reach.max(p);
            }
            let prev = self.reach_max.last().copied().unwrap_or(0);
            self.reach_max.push(prev.max(reach));
        }
        Ok(self.reach_max[c as usize - 1] < c)
    }

    /// The f-block containing `x`.
    ///
    /// Starting from `P_f(x)` normalized to its leftmost element, the set is
    /// grown by: closing under `f`, filling the least gap with its preimage
    /// closure, and absorbing any element left of the set that is joined to
    /// it, until it is a gap-free interval whose left end is a cut.
    pub fn find_block(&mut self, x: u64, ceiling: usize) -> Result<Block, BlockError> {
        let first = self.preimage_closure(x)?;
        let leftmost = *first.first().expect("closure contains x");
        let mut acc = self.preimage_closure(leftmost)?;
        acc.extend(first);
        loop {
            if acc.len() > ceiling {
                return Err(BlockError::NotABlock { x, size: acc.len() });
            }
            let mut missing = None;
            for &u in &acc {
                let v = self.value(u)?;
                if !acc.contains(&v) {
                    missing = Some(v);
                    break;
                }
            }
            if missing.is_none() {
                let (lo, hi) = (*acc.first().unwrap(), *acc.last().unwrap());
                if (acc.len() as u64) < hi - lo + 1 {
                    missing = (lo..=hi).find(|y| !acc.contains(y));
                }
            }
            if missing.is_none() {
                let lo = *acc.first().unwrap();
                if !self.is_cut(lo)? {
                    // Some element left of lo is joined across it; the last
                    // such is reached first by walking down from lo.
                    let mut z = lo - 1;
                    loop {
                        let joined = self.value(z)? >= lo || self.preimages(z)?.iter().any(|&p| p >= lo);
                        if joined {
                            break;
                        }
                        z -= 1;
                    }
                    missing = Some(z);
                }
            }
            match missing {
                Some(y) => {
                    let more = self.preimage_closure(y)?;
                    acc.extend(more);
                }
                None => {
                    let lo = *acc.first().unwrap();
                    let vals: Vec<u64> = acc.iter().map(|&u| self.values[u as usize]).collect();
                    return Ok(Block::from_values(lo, &vals));
                }
            }
        }
    }
}

pub fn preimage_closure(f: &BlockFunction, cp: &dyn CpOracle, x: u64, budget: u64) -> Result<BTreeSet<u64>, BlockError> {
    Scanner::new(f, cp, budget).preimage_closure(x)
}

pub fn find_block(f: &BlockFunction, cp: &dyn CpOracle, x: u64, budget: u64) -> Result<Block, BlockError> {
    find_block_with_ceiling(f, cp, x, budget, DEFAULT_CEILING)
}

pub fn find_block_with_ceiling(
    f: &BlockFunction,
    cp: &dyn CpOracle,
    x: u64,
    budget: u64,
    ceiling: usize,
) -> Result<Block, BlockError> {
    Scanner::new(f, cp, budget).find_block(x, ceiling)
}
