//! A minimal register machine with step-indexed evaluation.
//!
//! Programs have four instructions:
//!
//! | text            | effect                                                        |
//! |-----------------|---------------------------------------------------------------|
//! | `INC r`         | `r += 1`                                                      |
//! | `DECJZ r label` | if `r == 0` jump to `label`, otherwise `r -= 1`               |
//! | `QRY r`         | `r := oracle(r)` (oracle programs only)                       |
//! | `HALT r`        | stop with output `r`                                          |
//!
//! The input is placed in register 0, every other register starts at zero.
//! Running off the end of the instruction list halts with output register 0.
//! A label is either a `name:` line or a literal instruction index.
//! Each executed instruction costs one step.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Highest register index a program may mention.
pub const MAX_REGISTER: usize = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Instr {
    Inc(usize),
    /// Jump target is an instruction index; `len` means "fall off the end".
    DecJz(usize, usize),
    Qry(usize),
    Halt(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown opcode `{0}`")]
    UnknownOpcode(String),
    #[error("wrong number of operands for `{0}`")]
    Arity(String),
    #[error("bad register `{0}`")]
    BadRegister(String),
    #[error("undefined label `{0}`")]
    UndefinedLabel(String),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("QRY is only allowed in oracle programs")]
    OracleInPlainProgram,
}

/// Result of a budgeted run of a [`Program`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Halted(u64),
    Exhausted,
}

impl Outcome {
    pub fn value(self) -> Option<u64> {
        match self {
            Outcome::Halted(v) => Some(v),
            Outcome::Exhausted => None,
        }
    }
}

/// Result of a budgeted run of an [`OracleProgram`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OracleOutcome {
    /// `use_` is one more than the largest oracle position queried, or 0.
    Halted { value: u64, use_: usize },
    Exhausted,
    /// The run asked for a position the supplied prefix does not cover.
    OracleUnderflow(usize),
}

impl OracleOutcome {
    pub fn halted(self) -> Option<(u64, usize)> {
        match self {
            OracleOutcome::Halted { value, use_ } => Some((value, use_)),
            _ => None,
        }
    }
}

/// A program of the plain (oracle-free) machine.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Program {
    instrs: Vec<Instr>,
    registers: usize,
    index: usize,
}

/// A program that may use `QRY`. Houses Turing functionals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OracleProgram(Program);

fn check_register(tok: &str, line: usize) -> Result<usize, ParseError> {
    tok.parse::<usize>()
        .ok()
        .filter(|&r| r <= MAX_REGISTER)
        .ok_or_else(|| ParseError {
            line,
            kind: ParseErrorKind::BadRegister(tok.to_string()),
        })
}

fn parse_instrs(text: &str, allow_oracle: bool) -> Result<Vec<Instr>, ParseError> {
    // First pass: strip comments, collect labels and raw instruction lines.
    let mut labels: HashMap<String, usize> = HashMap::new();
    let mut raw: Vec<(usize, Vec<&str>)> = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line_no = no + 1;
        let mut body = line.split('#').next().unwrap_or("").trim();
        if let Some(colon) = body.find(':') {
            let name = body[..colon].trim();
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(ParseError {
                    line: line_no,
                    kind: ParseErrorKind::UnknownOpcode(body.to_string()),
                });
            }
            if labels.insert(name.to_string(), raw.len()).is_some() {
                return Err(ParseError {
                    line: line_no,
                    kind: ParseErrorKind::DuplicateLabel(name.to_string()),
                });
            }
            body = body[colon + 1..].trim();
        }
        if body.is_empty() {
            continue;
        }
        raw.push((line_no, body.split_whitespace().collect()));
    }

    let len = raw.len();
    let mut instrs = Vec::with_capacity(len);
    for (line, toks) in raw {
        let op = toks[0];
        let arity = |n: usize| {
            if toks.len() == n + 1 {
                Ok(())
            } else {
                Err(ParseError {
                    line,
                    kind: ParseErrorKind::Arity(op.to_string()),
                })
            }
        };
        let instr = match op {
            "INC" => {
                arity(1)?;
                Instr::Inc(check_register(toks[1], line)?)
            }
            "HALT" => {
                arity(1)?;
                Instr::Halt(check_register(toks[1], line)?)
            }
            "QRY" => {
                arity(1)?;
                if !allow_oracle {
                    return Err(ParseError {
                        line,
                        kind: ParseErrorKind::OracleInPlainProgram,
                    });
                }
                Instr::Qry(check_register(toks[1], line)?)
            }
            "DECJZ" => {
                arity(2)?;
                let r = check_register(toks[1], line)?;
                let target = match labels.get(toks[2]) {
                    Some(&t) => t,
                    None => match toks[2].parse::<usize>() {
                        Ok(t) if t <= len => t,
                        _ => {
                            return Err(ParseError {
                                line,
                                kind: ParseErrorKind::UndefinedLabel(toks[2].to_string()),
                            })
                        }
                    },
                };
                Instr::DecJz(r, target)
            }
            other => {
                return Err(ParseError {
                    line,
                    kind: ParseErrorKind::UnknownOpcode(other.to_string()),
                })
            }
        };
        instrs.push(instr);
    }
    Ok(instrs)
}

fn register_count(instrs: &[Instr]) -> usize {
    instrs
        .iter()
        .map(|i| match *i {
            Instr::Inc(r) | Instr::DecJz(r, _) | Instr::Qry(r) | Instr::Halt(r) => r,
        })
        .max()
        .unwrap_or(0)
        + 1
}

fn validate(instrs: &[Instr]) -> Result<(), ParseErrorKind> {
    for i in instrs {
        match *i {
            Instr::Inc(r) | Instr::Qry(r) | Instr::Halt(r) if r > MAX_REGISTER => {
                return Err(ParseErrorKind::BadRegister(r.to_string()))
            }
            Instr::DecJz(r, t) => {
                if r > MAX_REGISTER {
                    return Err(ParseErrorKind::BadRegister(r.to_string()));
                }
                if t > instrs.len() {
                    return Err(ParseErrorKind::UndefinedLabel(t.to_string()));
                }
            }
            _ => {}
        }
    }
    Ok(())
}

enum Stop {
    Halted(u64),
    Exhausted,
    Underflow(usize),
}

fn run(instrs: &[Instr], registers: usize, x: u64, oracle: Option<&[bool]>, budget: u64) -> (Stop, Option<usize>) {
    let mut regs = vec![0u64; registers.max(1)];
    regs[0] = x;
    let mut pc = 0usize;
    let mut steps = 0u64;
    let mut max_query: Option<usize> = None;
    loop {
        let Some(&instr) = instrs.get(pc) else {
            return (Stop::Halted(regs[0]), max_query);
        };
        if steps >= budget {
            return (Stop::Exhausted, max_query);
        }
        steps += 1;
        match instr {
            Instr::Inc(r) => {
                regs[r] = regs[r].saturating_add(1);
                pc += 1;
            }
            Instr::DecJz(r, target) => {
                if regs[r] == 0 {
                    pc = target;
                } else {
                    regs[r] -= 1;
                    pc += 1;
                }
            }
            Instr::Qry(r) => {
                let oracle = oracle.expect("validated: QRY only in oracle programs");
                let pos = usize::try_from(regs[r]).unwrap_or(usize::MAX);
                if pos >= oracle.len() {
                    return (Stop::Underflow(pos), max_query);
                }
                max_query = Some(max_query.map_or(pos, |m| m.max(pos)));
                regs[r] = u64::from(oracle[pos]);
                pc += 1;
            }
            Instr::Halt(r) => return (Stop::Halted(regs[r]), max_query),
        }
    }
}

impl Program {
    /// Parses program text. `QRY` is rejected.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let instrs = parse_instrs(text, false)?;
        Ok(Self::from_validated(instrs))
    }

    /// Builds a program from already-resolved instructions.
    pub fn from_instrs(instrs: Vec<Instr>) -> Result<Self, ParseErrorKind> {
        validate(&instrs)?;
        if instrs.iter().any(|i| matches!(i, Instr::Qry(_))) {
            return Err(ParseErrorKind::OracleInPlainProgram);
        }
        Ok(Self::from_validated(instrs))
    }

    fn from_validated(instrs: Vec<Instr>) -> Self {
        let registers = register_count(&instrs);
        Program {
            instrs,
            registers,
            index: 0,
        }
    }

    pub fn with_index(mut self, index: usize) -> Self {
        self.index = index;
        self
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn instrs(&self) -> &[Instr] {
        &self.instrs
    }

    /// Runs on input `x` for at most `budget` steps.
    pub fn evaluate(&self, x: u64, budget: u64) -> Outcome {
        match run(&self.instrs, self.registers, x, None, budget).0 {
            Stop::Halted(v) => Outcome::Halted(v),
            Stop::Exhausted => Outcome::Exhausted,
            Stop::Underflow(_) => unreachable!("plain programs never query"),
        }
    }
}

impl OracleProgram {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let instrs = parse_instrs(text, true)?;
        Ok(OracleProgram(Program::from_validated(instrs)))
    }

    pub fn from_instrs(instrs: Vec<Instr>) -> Result<Self, ParseErrorKind> {
        validate(&instrs)?;
        Ok(OracleProgram(Program::from_validated(instrs)))
    }

    pub fn with_index(self, index: usize) -> Self {
        OracleProgram(self.0.with_index(index))
    }

    pub fn index(&self) -> usize {
        self.0.index
    }

    pub fn instrs(&self) -> &[Instr] {
        &self.0.instrs
    }

    /// Runs on input `x` against a finite characteristic prefix of the oracle.
    pub fn evaluate(&self, x: u64, oracle: &[bool], budget: u64) -> OracleOutcome {
        let (stop, max_query) = run(&self.0.instrs, self.0.registers, x, Some(oracle), budget);
        match stop {
            Stop::Halted(value) => OracleOutcome::Halted {
                value,
                use_: max_query.map_or(0, |m| m + 1),
            },
            Stop::Exhausted => OracleOutcome::Exhausted,
            Stop::Underflow(p) => OracleOutcome::OracleUnderflow(p),
        }
    }
}

/// Convenience wrapper for [`OracleProgram::evaluate`].
pub fn evaluate_with_oracle(q: &OracleProgram, x: u64, oracle: &[bool], budget: u64) -> OracleOutcome {
    q.evaluate(x, oracle, budget)
}

/// Convenience wrapper for [`Program::evaluate`].
pub fn evaluate(p: &Program, x: u64, budget: u64) -> Outcome {
    p.evaluate(x, budget)
}

fn write_instrs(f: &mut fmt::Formatter<'_>, instrs: &[Instr]) -> fmt::Result {
    for i in instrs {
        match *i {
            Instr::Inc(r) => writeln!(f, "INC {r}")?,
            Instr::DecJz(r, t) => writeln!(f, "DECJZ {r} {t}")?,
            Instr::Qry(r) => writeln!(f, "QRY {r}")?,
            Instr::Halt(r) => writeln!(f, "HALT {r}")?,
        }
    }
    Ok(())
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_instrs(f, &self.instrs)
    }
}

impl fmt::Display for OracleProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_instrs(f, &self.0.instrs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_zero_halts() {
        let p = Program::parse("HALT 1").unwrap();
        assert_eq!(p.evaluate(7, 100), Outcome::Halted(0));
    }

    #[test]
    fn loop_is_exhausted() {
        let p = Program::parse("top: DECJZ 1 top").unwrap();
        assert_eq!(p.evaluate(0, 10_000), Outcome::Exhausted);
    }

    #[test]
    fn successor_by_hand() {
        // INC 0; HALT 0 -- two steps.
        let p = Program::parse("INC 0\nHALT 0").unwrap();
        assert_eq!(p.evaluate(41, 1000), Outcome::Halted(42));
        assert_eq!(p.evaluate(41, 1), Outcome::Exhausted);
        assert_eq!(p.evaluate(41, 2), Outcome::Halted(42));
    }

    #[test]
    fn falling_off_the_end_outputs_register_zero() {
        let p = Program::parse("INC 0\nINC 0").unwrap();
        assert_eq!(p.evaluate(3, 2), Outcome::Halted(5));
    }

    #[test]
    fn numeric_labels_and_comments() {
        let p = Program::parse("# jump straight to the end\nDECJZ 1 2\nINC 0\n").unwrap();
        assert_eq!(p.evaluate(4, 10), Outcome::Halted(4));
    }

    #[test]
    fn single_query() {
        let q = OracleProgram::parse("QRY 0\nHALT 0").unwrap();
        assert_eq!(q.evaluate(0, &[true, false], 100), OracleOutcome::Halted { value: 1, use_: 1 });
    }

    #[test]
    fn query_past_prefix_underflows() {
        let q = OracleProgram::parse("INC 1\nINC 1\nINC 1\nINC 1\nINC 1\nQRY 1\nHALT 1").unwrap();
        assert_eq!(q.evaluate(0, &[true, false], 100), OracleOutcome::OracleUnderflow(5));
    }

    #[test]
    fn rejects_unknown_opcode() {
        let err = Program::parse("INC 0\nJMP 3").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(matches!(err.kind, ParseErrorKind::UnknownOpcode(_)));
    }

    #[test]
    fn rejects_query_in_plain_program() {
        assert!(matches!(
            Program::parse("QRY 0").unwrap_err().kind,
            ParseErrorKind::OracleInPlainProgram
        ));
    }

    #[test]
    fn rejects_undefined_label_and_bad_register() {
        assert!(matches!(
            Program::parse("DECJZ 0 nowhere").unwrap_err().kind,
            ParseErrorKind::UndefinedLabel(_)
        ));
        assert!(matches!(
            Program::parse("INC 64").unwrap_err().kind,
            ParseErrorKind::BadRegister(_)
        ));
        assert!(matches!(
            Program::parse("a:\na: HALT 0").unwrap_err().kind,
            ParseErrorKind::DuplicateLabel(_)
        ));
    }

    #[test]
    fn display_round_trips() {
        let p = Program::parse("top: DECJZ 0 done\nINC 1\nDECJZ 2 top\ndone: HALT 1").unwrap();
        let again = Program::parse(&p.to_string()).unwrap();
        assert_eq!(p, again);
    }
}
