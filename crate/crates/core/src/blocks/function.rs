//! Total functions on ω presented by a block specification, a program, or a
//! finite table.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::machine::Program;
use crate::structure::FiniteStructure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum FnError {
    #[error("evaluation of f({0}) exhausted its budget")]
    Exhausted(u64),
    #[error("f({0}) is outside the known prefix")]
    Undefined(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct SpecParseError {
    pub line: usize,
    pub message: String,
}

/// Checks that `shape` is a single f-block: closed, and with no proper cut
/// splitting it into two closed intervals.
pub fn is_block_shape(shape: &FiniteStructure) -> bool {
    let n = shape.size();
    if n == 0 || !shape.is_function_closed() {
        return false;
    }
    // An edge x → f(x) crosses every cut strictly between min and max of its ends.
    let mut crossing = vec![0i64; n + 1];
    for (x, &y) in shape.fvals().iter().enumerate() {
        let (a, b) = (x.min(y), x.max(y));
        if a < b {
            crossing[a + 1] += 1;
            crossing[b + 1] -= 1;
        }
    }
    let mut running = 0;
    for c in crossing.iter().take(n).skip(1) {
        running += c;
        if running == 0 {
            return false;
        }
    }
    true
}

/// Extensional presentation of a block function: a list of block types and a
/// schedule of how many consecutive copies of each to emit.
///
/// Past the emitted region the function is the identity, unless `repeat` is
/// set, in which case the whole schedule repeats forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSpec {
    type_ids: Vec<String>,
    types: Vec<FiniteStructure>,
    lookup: HashMap<FiniteStructure, usize>,
    emits: Vec<Emit>,
    repeat: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Emit {
    ty: usize,
    count: u64,
    start: u64,
}

impl Default for BlockSpec {
    fn default() -> Self {
        Self::new()
    }
}

impl BlockSpec {
    pub fn new() -> Self {
        BlockSpec {
            type_ids: Vec::new(),
            types: Vec::new(),
            lookup: HashMap::new(),
            emits: Vec::new(),
            repeat: false,
        }
    }

    /// Registers a type, returning the index of an isomorphic existing one
    /// when there is one.
    ///
    /// Panics if `shape` is not a block shape.
    pub fn add_type(&mut self, shape: FiniteStructure) -> usize {
        assert!(is_block_shape(&shape), "not a block shape: {shape}");
        if let Some(&i) = self.lookup.get(&shape) {
            return i;
        }
        let i = self.types.len();
        self.type_ids.push(format!("t{i}"));
        self.lookup.insert(shape.clone(), i);
        self.types.push(shape);
        i
    }

    /// Appends `count` consecutive copies of type `ty`.
    pub fn push(&mut self, ty: usize, count: u64) {
        assert!(ty < self.types.len(), "unknown type {ty}");
        if count == 0 {
            return;
        }
        if let Some(last) = self.emits.last_mut() {
            if last.ty == ty {
                last.count += count;
                return;
            }
        }
        let start = self.emitted_len();
        self.emits.push(Emit { ty, count, start });
    }

    pub fn push_shape(&mut self, shape: FiniteStructure, count: u64) -> usize {
        let ty = self.add_type(shape);
        self.push(ty, count);
        ty
    }

    pub fn set_repeat(&mut self, repeat: bool) {
        self.repeat = repeat;
    }

    pub fn repeats(&self) -> bool {
        self.repeat
    }

    pub fn types(&self) -> &[FiniteStructure] {
        &self.types
    }

    pub fn type_id(&self, ty: usize) -> &str {
        &self.type_ids[ty]
    }

    /// Length of one pass through the schedule.
    pub fn emitted_len(&self) -> u64 {
        self.emits
            .last()
            .map_or(0, |e| e.start + e.count * self.types[e.ty].size() as u64)
    }

    /// `(start, type)` for every emitted block, in order.
    pub fn blocks(&self) -> impl Iterator<Item = (u64, usize)> + '_ {
        self.emits.iter().flat_map(move |e| {
            let size = self.types[e.ty].size() as u64;
            (0..e.count).map(move |k| (e.start + k * size, e.ty))
        })
    }

    /// Number of emitted blocks in one pass.
    pub fn block_count(&self) -> u64 {
        self.emits.iter().map(|e| e.count).sum()
    }

    /// Indices of types with at least one emitted block, ascending.
    pub fn present_types(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.emits.iter().filter(|e| e.count > 0).map(|e| e.ty).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Drops everything from emitted position `pos` on; `pos` must be a
    /// block boundary.
    pub fn truncate(&mut self, pos: u64) {
        while let Some(last) = self.emits.last_mut() {
            let size = self.types[last.ty].size() as u64;
            if last.start >= pos {
                self.emits.pop();
                continue;
            }
            let keep = (pos - last.start) / size;
            assert_eq!(last.start + keep * size, pos, "truncation inside a block");
            last.count = keep;
            if keep == 0 {
                self.emits.pop();
            }
            break;
        }
    }

    /// Block containing `x` as `(start, type)`, or `None` in the identity tail.
    pub fn locate(&self, x: u64) -> Option<(u64, usize)> {
        let period = self.emitted_len();
        let (base, r) = if self.repeat && period > 0 {
            ((x / period) * period, x % period)
        } else if x < period {
            (0, x)
        } else {
            return None;
        };
        let i = self.emits.partition_point(|e| e.start <= r) - 1;
        let e = self.emits[i];
        let size = self.types[e.ty].size() as u64;
        let k = (r - e.start) / size;
        Some((base + e.start + k * size, e.ty))
    }

    pub fn value(&self, x: u64) -> u64 {
        match self.locate(x) {
            Some((start, ty)) => start + self.types[ty].image((x - start) as usize) as u64,
            None => x,
        }
    }

    /// Exact size of the preimage of `x`.
    pub fn cp(&self, x: u64) -> u64 {
        match self.locate(x) {
            Some((start, ty)) => {
                let rel = (x - start) as usize;
                self.types[ty].fvals().iter().filter(|&&v| v == rel).count() as u64
            }
            None => 1,
        }
    }

    /// Parses the line format
    ///
    /// ```text
    /// type <id> fvals=<comma list>
    /// emit <type-id> x<count>
    /// repeat
    /// ```
    pub fn parse(text: &str) -> Result<Self, SpecParseError> {
        let mut spec = BlockSpec::new();
        let mut ids: HashMap<String, usize> = HashMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = no + 1;
            let err = |message: String| SpecParseError { line, message };
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let toks: Vec<&str> = body.split_whitespace().collect();
            match toks[0] {
                "type" => {
                    if toks.len() != 3 {
                        return Err(err("expected `type <id> fvals=<list>`".into()));
                    }
                    let list = toks[2]
                        .strip_prefix("fvals=")
                        .ok_or_else(|| err("expected `fvals=`".into()))?;
                    let fvals = list
                        .split(',')
                        .map(|v| v.parse::<usize>().map_err(|_| err(format!("bad value `{v}`"))))
                        .collect::<Result<Vec<_>, _>>()?;
                    let shape = FiniteStructure::new(fvals);
                    if !is_block_shape(&shape) {
                        return Err(err(format!("type `{}` is not a single block", toks[1])));
                    }
                    if ids.contains_key(toks[1]) {
                        return Err(err(format!("duplicate type `{}`", toks[1])));
                    }
                    let ty = spec.add_type(shape);
                    if spec.type_ids[ty].starts_with('t') && ty == spec.types.len() - 1 {
                        spec.type_ids[ty] = toks[1].to_string();
                    }
                    ids.insert(toks[1].to_string(), ty);
                }
                "emit" => {
                    if toks.len() != 3 {
                        return Err(err("expected `emit <type-id> x<count>`".into()));
                    }
                    let ty = *ids
                        .get(toks[1])
                        .ok_or_else(|| err(format!("unknown type `{}`", toks[1])))?;
                    let count = toks[2]
                        .strip_prefix('x')
                        .and_then(|c| c.parse::<u64>().ok())
                        .ok_or_else(|| err(format!("bad count `{}`", toks[2])))?;
                    spec.push(ty, count);
                }
                "repeat" if toks.len() == 1 => spec.repeat = true,
                other => return Err(err(format!("unknown record `{other}`"))),
            }
        }
        Ok(spec)
    }
}

impl fmt::Display for BlockSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (id, shape) in self.type_ids.iter().zip(&self.types) {
            let vals: Vec<String> = shape.fvals().iter().map(|v| v.to_string()).collect();
            writeln!(f, "type {id} fvals={}", vals.join(","))?;
        }
        for e in &self.emits {
            writeln!(f, "emit {} x{}", self.type_ids[e.ty], e.count)?;
        }
        if self.repeat {
            writeln!(f, "repeat")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Source {
    Spec(BlockSpec),
    Program { program: Program, budget: u64 },
    Table(Vec<u64>),
}

/// Answers `cp_f(x) = card(f⁻¹(x))`. `None` means no answer (budget or no source).
pub trait CpOracle {
    fn cp(&self, x: u64) -> Option<u64>;
}

impl<F: Fn(u64) -> Option<u64>> CpOracle for F {
    fn cp(&self, x: u64) -> Option<u64> {
        self(x)
    }
}

/// A total function `f: ω → ω`, with an optional source for `cp_f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockFunction {
    source: Source,
    cp_source: Option<(Program, u64)>,
}

impl BlockFunction {
    pub fn from_spec(spec: BlockSpec) -> Self {
        BlockFunction {
            source: Source::Spec(spec),
            cp_source: None,
        }
    }

    /// `f` computed by a program, each evaluation limited to `budget` steps.
    pub fn from_program(program: Program, budget: u64) -> Self {
        BlockFunction {
            source: Source::Program { program, budget },
            cp_source: None,
        }
    }

    /// A finite table; values past it are undefined.
    pub fn from_table(values: Vec<u64>) -> Self {
        BlockFunction {
            source: Source::Table(values),
            cp_source: None,
        }
    }

    pub fn identity() -> Self {
        Self::from_spec(BlockSpec::new())
    }

    pub fn with_cp_program(mut self, program: Program, budget: u64) -> Self {
        self.cp_source = Some((program, budget));
        self
    }

    pub fn spec(&self) -> Option<&BlockSpec> {
        match &self.source {
            Source::Spec(s) => Some(s),
            _ => None,
        }
    }

    /// Length of the known prefix for table-sourced functions.
    pub fn known_len(&self) -> Option<u64> {
        match &self.source {
            Source::Table(t) => Some(t.len() as u64),
            _ => None,
        }
    }

    pub fn value(&self, x: u64) -> Result<u64, FnError> {
        match &self.source {
            Source::Spec(s) => Ok(s.value(x)),
            Source::Program { program, budget } => program.evaluate(x, *budget).value().ok_or(FnError::Exhausted(x)),
            Source::Table(t) => t.get(x as usize).copied().ok_or(FnError::Undefined(x)),
        }
    }

    /// `f↾n` as a vector.
    pub fn prefix(&self, n: u64) -> Result<Vec<u64>, FnError> {
        (0..n).map(|x| self.value(x)).collect()
    }
}

impl CpOracle for BlockFunction {
    fn cp(&self, x: u64) -> Option<u64> {
        if let Some((p, budget)) = &self.cp_source {
            return p.evaluate(x, *budget).value();
        }
        match &self.source {
            Source::Spec(s) => Some(s.cp(x)),
            Source::Table(t) => Some(t.iter().filter(|&&v| v == x).count() as u64),
            Source::Program { .. } => None,
        }
    }
}
