//! Explicit program catalogs and small program builders.
//!
//! Indices are catalog positions. Register 9 is never incremented by any
//! catalog program, so `DECJZ 9 label` is an unconditional jump.

use crate::machine::{Instr, OracleProgram, Program};

/// Source text of the standard sixteen-program catalog, in index order.
pub const STANDARD_SOURCES: [(&str, &str); 16] = [
    ("const0", "HALT 1\n"),
    ("const1", "INC 1\nHALT 1\n"),
    ("identity", "HALT 0\n"),
    ("successor", "INC 0\nHALT 0\n"),
    ("loop", "top: DECJZ 9 top\n"),
    ("const2", "INC 1\nINC 1\nHALT 1\n"),
    ("predecessor", "DECJZ 0 done\ndone: HALT 0\n"),
    (
        "double",
        "top: DECJZ 0 done\nINC 1\nINC 1\nDECJZ 9 top\ndone: HALT 1\n",
    ),
    (
        "parity",
        "even: DECJZ 0 out0\nDECJZ 0 out1\nDECJZ 9 even\nout0: HALT 1\nout1: INC 1\nHALT 1\n",
    ),
    ("is_zero", "DECJZ 0 yes\nHALT 1\nyes: INC 1\nHALT 1\n"),
    ("countdown", "top: DECJZ 0 done\nDECJZ 9 top\ndone: HALT 0\n"),
    (
        "one_if_even_else_loop",
        "even: DECJZ 0 one\nDECJZ 0 spin\nDECJZ 9 even\none: INC 1\nHALT 1\nspin: DECJZ 9 spin\n",
    ),
    ("slow_const1", SLOW_CONST1),
    ("loop_on_zero", "DECJZ 0 spin\nHALT 1\nspin: DECJZ 9 spin\n"),
    (
        "halve",
        "top: DECJZ 0 done\nDECJZ 0 done\nINC 1\nDECJZ 9 top\ndone: HALT 1\n",
    ),
    (
        "mod3",
        "top: DECJZ 0 z0\nDECJZ 0 z1\nDECJZ 0 z2\nDECJZ 9 top\nz0: HALT 1\nz1: INC 1\nHALT 1\nz2: INC 1\nINC 1\nHALT 1\n",
    ),
];

// 150 increments, then a 150-round countdown: 453 steps on any input.
const SLOW_CONST1: &str = concat!(
    "INC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\n",
    "INC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\n",
    "INC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\n",
    "INC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\n",
    "INC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\n",
    "INC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\n",
    "INC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\n",
    "INC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\n",
    "INC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\n",
    "INC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\n",
    "INC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\n",
    "INC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\n",
    "INC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\n",
    "INC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\n",
    "INC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\nINC 2\n",
    "top: DECJZ 2 done\nDECJZ 9 top\ndone: INC 1\nHALT 1\n",
);

/// Parity of `oracle(0) + oracle(1) + oracle(2) + oracle(3)`.
pub const PARITY4_SOURCE: &str = "\
INC 1
INC 2
INC 2
INC 3
INC 3
INC 3
QRY 4
QRY 1
QRY 2
QRY 3
DECJZ 4 s4
DECJZ 5 t4
DECJZ 9 s4
t4: INC 5
s4: DECJZ 1 s1
DECJZ 5 t1
DECJZ 9 s1
t1: INC 5
s1: DECJZ 2 s2
DECJZ 5 t2
DECJZ 9 s2
t2: INC 5
s2: DECJZ 3 s3
DECJZ 5 t3
DECJZ 9 s3
t3: INC 5
s3: HALT 5
";

/// The standard sixteen-program catalog.
pub fn standard() -> Vec<Program> {
    STANDARD_SOURCES
        .iter()
        .enumerate()
        .map(|(i, (_, src))| Program::parse(src).expect("catalog source parses").with_index(i))
        .collect()
}

/// The first `n` programs of [`standard`].
pub fn standard_prefix(n: usize) -> Vec<Program> {
    standard().into_iter().take(n).collect()
}

pub fn constant(v: u64) -> Program {
    let mut instrs = vec![Instr::Inc(1); v as usize];
    instrs.push(Instr::Halt(1));
    Program::from_instrs(instrs).expect("well-formed")
}

pub fn identity() -> Program {
    Program::from_instrs(vec![Instr::Halt(0)]).expect("well-formed")
}

pub fn successor() -> Program {
    Program::from_instrs(vec![Instr::Inc(0), Instr::Halt(0)]).expect("well-formed")
}

pub fn diverging() -> Program {
    Program::from_instrs(vec![Instr::DecJz(9, 0)]).expect("well-formed")
}

/// A program returning `table[x]` for `x < table.len()` and `x + tail_shift`
/// beyond the table.
pub fn lookup_table(table: &[u64], tail_shift: u64) -> Program {
    let m = table.len();
    let mut instrs = Vec::new();
    // Entry k of the dispatch chain jumps to the k-th value block.
    let dispatch_len = m;
    let tail_len = m + tail_shift as usize + 1;
    let mut value_starts = Vec::with_capacity(m);
    let mut at = dispatch_len + tail_len;
    for &v in table {
        value_starts.push(at);
        at += v as usize + 1;
    }
    for &start in &value_starts {
        instrs.push(Instr::DecJz(0, start));
    }
    instrs.extend(std::iter::repeat_n(Instr::Inc(0), m + tail_shift as usize));
    instrs.push(Instr::Halt(0));
    for &v in table {
        instrs.extend(std::iter::repeat_n(Instr::Inc(1), v as usize));
        instrs.push(Instr::Halt(1));
    }
    Program::from_instrs(instrs).expect("well-formed")
}

/// `Φ^X(x) = X(c)` when `x == c`, otherwise `0` without querying.
pub fn query_if_equal(c: u64) -> OracleProgram {
    let c = c as usize;
    // Layout: 2c dispatch instructions, then the final test, then the two exits.
    let no = 2 * c + 1;
    let yes = no + 1;
    let mut instrs = Vec::with_capacity(2 * c + 4);
    for _ in 0..c {
        instrs.push(Instr::DecJz(0, no));
        instrs.push(Instr::Inc(1));
    }
    instrs.push(Instr::DecJz(0, yes));
    instrs.push(Instr::Halt(9));
    instrs.push(Instr::Qry(1));
    instrs.push(Instr::Halt(1));
    debug_assert_eq!(instrs[no], Instr::Halt(9));
    OracleProgram::from_instrs(instrs).expect("well-formed")
}

/// `Ψ^X(x) = X(x)`; the use is `x + 1`.
pub fn query_input() -> OracleProgram {
    OracleProgram::from_instrs(vec![Instr::Qry(0), Instr::Halt(0)]).expect("well-formed")
}

/// A functional ignoring its oracle and returning `v`.
pub fn oracle_constant(v: u64) -> OracleProgram {
    let mut instrs = vec![Instr::Inc(1); v as usize];
    instrs.push(Instr::Halt(1));
    OracleProgram::from_instrs(instrs).expect("well-formed")
}
