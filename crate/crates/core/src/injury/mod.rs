//! Priority constructions: the finite-injury construction of a block
//! function with non-computable `cp_f`, and a stage-bounded engine for the
//! tree-of-strategies construction of a copy.

mod finite;
mod layout;
mod opponent;
mod tree;
mod witness;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::log::EventLog;

pub use finite::{run_finite_injury, FiniteInjuryRun, StageRecord, StrategyTrace};
pub use opponent::{
    cooperating_triple, first_marker_code, gamma, gamma_prefix, silent_triple, static_triple, Opponent, Triple,
};
pub use tree::{
    current_path, run_tree_construction, MPhase, MRecord, MarkerCase, StrategyNode, TreeConfig, TreeError, TreeRun,
    TreeState,
};
pub use witness::{verify_stop_witness, StopCheck, StopClause, StopWitness};

/// An outcome in `Λ = {s} ∪ {w_m, w'_m}`.
///
/// Ordered `s < … < w'_1 < w_1 < w'_0 < w_0`; the leftmost outcome is the
/// least.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Stop,
    /// Waiting at Step 3 for this `m`.
    W(u64),
    /// Waiting at Step 5 for this `m`.
    WPrime(u64),
}

impl Outcome {
    fn rank(self) -> (u8, u64, u8) {
        // Smaller rank = further left.
        match self {
            Outcome::Stop => (0, 0, 0),
            Outcome::WPrime(m) => (1, u64::MAX - m, 0),
            Outcome::W(m) => (1, u64::MAX - m, 1),
        }
    }
}

impl Ord for Outcome {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl PartialOrd for Outcome {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Stop => write!(f, "s"),
            Outcome::W(m) => write!(f, "w{m}"),
            Outcome::WPrime(m) => write!(f, "w'{m}"),
        }
    }
}

impl FromStr for Outcome {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("bad outcome `{s}`");
        if s == "s" {
            return Ok(Outcome::Stop);
        }
        if let Some(m) = s.strip_prefix("w'") {
            return m.parse().map(Outcome::WPrime).map_err(|_| bad());
        }
        if let Some(m) = s.strip_prefix('w') {
            return m.parse().map(Outcome::W).map_err(|_| bad());
        }
        Err(bad())
    }
}

impl Serialize for Outcome {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Address of a tree node: the outcomes leading to it from the root.
pub fn address_string(address: &[Outcome]) -> String {
    let parts: Vec<String> = address.iter().map(|o| o.to_string()).collect();
    format!("<{}>", parts.join(","))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum RequirementStatus {
    /// `witness` is `w_i` for the finite-injury run, and the index into
    /// [`ConstructionReport::stops`] for the tree run.
    SatisfiedVia { outcome: String, witness: u64 },
    Waiting { step: u8, m: Option<u64> },
    /// The strategy ran out of `m` values (all `m ≤ m_cap` wait at Step 6).
    Budget { m: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Artifact {
    /// The constructed function, as block-spec text, and its defined length.
    FPrefix { spec: String, len: u64 },
    /// The constructed copy, as a session log.
    Session { log: String, len: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructionReport {
    pub stages_run: u64,
    pub statuses: Vec<RequirementStatus>,
    /// `g_s` for every stage `s` run (empty for the finite-injury runner).
    pub path_trace: Vec<Vec<Outcome>>,
    pub stops: Vec<StopWitness>,
    pub artifact: Artifact,
    #[serde(skip)]
    pub log: EventLog,
}

impl ConstructionReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable report")
    }
}
