//! The mutable finite copy `A_s` that strategies build, with restraints and
//! a replayable event log.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::ComputableCopy;
use crate::blocks::BlockFunction;
use crate::structure::FiniteStructure;

/// Forbids insertions strictly after element `lo` and up to and including
/// the position of `hi` (or anywhere after `lo` when `hi` is `None`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Restraint {
    pub owner: String,
    pub lo: u64,
    pub hi: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("position {position} is restrained by {owner}")]
pub struct RestraintViolation {
    pub owner: String,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Event {
    Append(u64),
    Insert { element: u64, before: usize },
    Restrain(Restraint),
    Release(String),
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Append(e) => write!(f, "append {e}"),
            Event::Insert { element, before } => write!(f, "insert {element} before {before}"),
            Event::Restrain(r) => match r.hi {
                Some(hi) => write!(f, "restrain {} {} {hi}", r.owner, r.lo),
                None => write!(f, "restrain {} {} *", r.owner, r.lo),
            },
            Event::Release(owner) => write!(f, "release {owner}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogParseError {
    #[error("line {line}: malformed record `{text}`")]
    Malformed { line: usize, text: String },
    #[error("line {line}: element {element} is not the next fresh element {expected}")]
    NotFresh { line: usize, element: u64, expected: u64 },
    #[error("line {line}: {violation}")]
    Restrained { line: usize, violation: RestraintViolation },
    #[error("line {line}: position {position} outside the session")]
    OutOfRange { line: usize, position: usize },
}

impl FromStr for Event {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        let t: Vec<&str> = s.split_whitespace().collect();
        let num = |x: &str| x.parse::<u64>().map_err(|_| ());
        match t.as_slice() {
            ["append", e] => Ok(Event::Append(num(e)?)),
            ["insert", e, "before", p] => Ok(Event::Insert {
                element: num(e)?,
                before: p.parse().map_err(|_| ())?,
            }),
            ["restrain", owner, lo, hi] => Ok(Event::Restrain(Restraint {
                owner: owner.to_string(),
                lo: num(lo)?,
                hi: if *hi == "*" { None } else { Some(num(hi)?) },
            })),
            ["release", owner] => Ok(Event::Release(owner.to_string())),
            _ => Err(()),
        }
    }
}

/// A finite linear order of naturals, grown only by fresh elements.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CopySession {
    elements: Vec<u64>,
    restraints: Vec<Restraint>,
    next_fresh: u64,
    log: Vec<Event>,
}

impl CopySession {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn element_at(&self, pos: usize) -> u64 {
        self.elements[pos]
    }

    pub fn position(&self, x: u64) -> Option<usize> {
        self.elements.iter().position(|&e| e == x)
    }

    pub fn next_fresh(&self) -> u64 {
        self.next_fresh
    }

    pub fn restraints(&self) -> &[Restraint] {
        &self.restraints
    }

    pub fn log(&self) -> &[Event] {
        &self.log
    }

    pub fn log_text(&self) -> String {
        self.log.iter().map(|e| format!("{e}\n")).collect()
    }

    /// The live restraint, if any, that forbids putting a new element at `pos`.
    pub fn blocking(&self, pos: usize) -> Option<&Restraint> {
        self.restraints.iter().find(|r| {
            let lo = self.position(r.lo).expect("restrained element is placed");
            let hi = r.hi.map(|h| self.position(h).expect("restrained element is placed"));
            lo < pos && hi.is_none_or(|h| pos <= h)
        })
    }

    fn check(&self, pos: usize) -> Result<(), RestraintViolation> {
        match self.blocking(pos) {
            Some(r) => Err(RestraintViolation {
                owner: r.owner.clone(),
                position: pos,
            }),
            None => Ok(()),
        }
    }

    fn fresh(&mut self) -> u64 {
        let e = self.next_fresh;
        self.next_fresh += 1;
        e
    }

    /// Appends one fresh element.
    pub fn append(&mut self) -> Result<u64, RestraintViolation> {
        self.check(self.elements.len())?;
        let e = self.fresh();
        self.elements.push(e);
        self.log.push(Event::Append(e));
        Ok(e)
    }

    /// Appends one fresh element per element of `b`, returning their positions.
    pub fn append_block(&mut self, b: &FiniteStructure) -> Result<Vec<usize>, RestraintViolation> {
        self.check(self.elements.len())?;
        let start = self.elements.len();
        for _ in 0..b.size() {
            self.append()?;
        }
        Ok((start..self.elements.len()).collect())
    }

    /// Places exactly one fresh element immediately before `pos`.
    pub fn insert_before(&mut self, pos: usize) -> Result<u64, RestraintViolation> {
        assert!(pos <= self.elements.len(), "position {pos} outside the session");
        self.check(pos)?;
        let e = self.fresh();
        self.elements.insert(pos, e);
        self.log.push(Event::Insert { element: e, before: pos });
        Ok(e)
    }

    /// Restrains from element `lo` to element `hi`, or to the end when `hi` is `None`.
    pub fn restrain(&mut self, owner: &str, lo: u64, hi: Option<u64>) {
        assert!(self.position(lo).is_some(), "restraint anchor {lo} not placed");
        let r = Restraint {
            owner: owner.to_string(),
            lo,
            hi,
        };
        self.log.push(Event::Restrain(r.clone()));
        self.restraints.push(r);
    }

    /// Drops every restraint held by `owner`.
    pub fn release(&mut self, owner: &str) {
        if self.restraints.iter().any(|r| r.owner == owner) {
            self.restraints.retain(|r| r.owner != owner);
            self.log.push(Event::Release(owner.to_string()));
        }
    }

    /// The copy whose placed prefix is this session.
    pub fn to_copy(&self, f: BlockFunction) -> ComputableCopy {
        ComputableCopy::from_order(f, self.elements.clone())
    }

    /// Rebuilds a session from its log, checking freshness and restraints.
    pub fn replay(text: &str) -> Result<CopySession, LogParseError> {
        let mut s = CopySession::new();
        for (no, raw) in text.lines().enumerate() {
            let line = no + 1;
            if raw.trim().is_empty() {
                continue;
            }
            let ev: Event = raw.parse().map_err(|_| LogParseError::Malformed {
                line,
                text: raw.to_string(),
            })?;
            let fresh = |s: &CopySession, element: u64| {
                if element == s.next_fresh {
                    Ok(())
                } else {
                    Err(LogParseError::NotFresh {
                        line,
                        element,
                        expected: s.next_fresh,
                    })
                }
            };
            let restrained = |violation| LogParseError::Restrained { line, violation };
            match ev {
                Event::Append(e) => {
                    fresh(&s, e)?;
                    s.append().map_err(restrained)?;
                }
                Event::Insert { element, before } => {
                    fresh(&s, element)?;
                    if before > s.len() {
                        return Err(LogParseError::OutOfRange { line, position: before });
                    }
                    s.insert_before(before).map_err(restrained)?;
                }
                Event::Restrain(r) => {
                    if s.position(r.lo).is_none() || r.hi.is_some_and(|h| s.position(h).is_none()) {
                        return Err(LogParseError::Malformed {
                            line,
                            text: raw.to_string(),
                        });
                    }
                    s.restrain(&r.owner, r.lo, r.hi);
                }
                Event::Release(owner) => {
                    s.restraints.retain(|r| r.owner != owner);
                    s.log.push(Event::Release(owner));
                }
            }
        }
        Ok(s)
    }
}
