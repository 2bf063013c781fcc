//! The `spectra` command line.
//!
//! Machine output is line-delimited JSON records (to `--out`, or stdout);
//! a short human summary goes to stderr unless `SPECTRA_LOG_LEVEL=off`.
//! Exit codes: 0 ok, 1 configuration error, 2 structural failure, 3 budget
//! exhausted.

mod commands;
mod config;
mod injury;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::log::EventLog;

pub use config::{InjuryConfig, InjuryMode, OpponentKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_STRUCTURE: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "spectra", version, about = "Block functions, successor recovery and priority constructions")]
pub struct Cli {
    /// Seed for every randomized generator.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write records here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// Where `f` comes from.
#[derive(Debug, Args)]
pub struct FnSource {
    /// Block-spec file.
    #[arg(long, conflicts_with = "program")]
    pub spec: Option<PathBuf>,
    /// Program file computing `f`.
    #[arg(long)]
    pub program: Option<PathBuf>,
    /// Step budget per evaluation.
    #[arg(long, default_value_t = 10_000)]
    pub budget: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Function,
    Set,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split f↾n into blocks.
    Decompose {
        #[command(flatten)]
        source: FnSource,
        #[arg(short, long)]
        n: u64,
    },
    /// Recover Succ_A(x) from less/fimg queries on a copy.
    Recover {
        #[arg(long)]
        spec: PathBuf,
        /// Schedule file: `append` / `insert <k>` lines, or a program.
        #[arg(long)]
        schedule: Option<PathBuf>,
        /// Stages of a program schedule.
        #[arg(long, default_value_t = 256)]
        stages: u64,
        #[arg(short, long)]
        x: u64,
        /// Number of reveals.
        #[arg(long, default_value_t = 512)]
        budget: u64,
        /// How many unique segments to search for, and the window used.
        #[arg(long, default_value_t = 8)]
        segments: usize,
        #[arg(long, default_value_t = 256)]
        window: u64,
    },
    /// Run a priority construction.
    Injury {
        /// TOML run configuration; flags below override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum)]
        mode: Option<InjuryMode>,
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Catalog program files, in index order (default: the standard catalog).
        #[arg(long)]
        program: Vec<PathBuf>,
        #[arg(long)]
        stages: Option<u64>,
        #[arg(long = "m-cap")]
        m_cap: Option<u64>,
        /// Opponent for each requirement, in order (tree mode).
        #[arg(long, value_enum)]
        opponent: Vec<OpponentKind>,
        #[arg(long = "case-a")]
        case_a: bool,
    },
    /// Prefix-scale classification.
    Classify {
        #[command(flatten)]
        source: FnSource,
        #[arg(short, long)]
        n: u64,
        /// Read a program as a function or as a set.
        #[arg(long, value_enum, default_value = "function")]
        kind: KindArg,
    },
    /// Translate an acceptable notation onto the standard one.
    Translate {
        /// Notation bundle file.
        #[arg(long)]
        notation: PathBuf,
        /// Successor program in the notation (default: x + 1).
        #[arg(long)]
        program: Option<PathBuf>,
        #[arg(short, long)]
        n: u64,
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
    },
    /// Build an encoding copy.
    Encode {
        /// Catalog program files for the halting set (default: the standard catalog).
        #[arg(long)]
        program: Vec<PathBuf>,
        /// Stage budget.
        #[arg(long, default_value_t = 500)]
        budget: u64,
        /// Encode a seeded Δ₂ approximation into a copy of this block spec instead.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 16)]
        pairs: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    pub fn structure(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_STRUCTURE,
            message: message.into(),
        }
    }

    pub fn exhausted(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_EXHAUSTED,
            message: message.into(),
        }
    }
}

/// Summary verbosity from `SPECTRA_LOG_LEVEL`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Level {
    Off,
    Error,
    Info,
    Debug,
}

impl Level {
    pub fn from_env_value(v: Option<&str>) -> Level {
        match v.map(str::to_ascii_lowercase).as_deref() {
            Some("off") | Some("none") => Level::Off,
            Some("error") => Level::Error,
            Some("debug") | Some("trace") => Level::Debug,
            _ => Level::Info,
        }
    }
}

pub(crate) fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}

/// Runs one command. Records go to `--out` or `out`; the summary to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let level = Level::from_env_value(std::env::var("SPECTRA_LOG_LEVEL").ok().as_deref());
    run_with_level(args, level, out, err)
}

pub fn run_with_level<I, T>(args: I, level: Level, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let mut records = EventLog::new();
    let mut summary: Vec<String> = Vec::new();
    let result = commands::dispatch(&cli, &mut records, &mut summary);
    let code = match &result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            records.record("error", &serde_json::json!({"code": e.code, "message": e.message}));
            e.code
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, records.to_text()),
        None => records.write_to(out),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write records: {e}");
        return EXIT_CONFIG;
    }
    if let Err(e) = &result {
        if level >= Level::Error {
            let _ = writeln!(err, "error: {}", e.message);
        }
    }
    if level >= Level::Info {
        for line in &summary {
            let _ = writeln!(err, "{line}");
        }
    }
    if level >= Level::Debug {
        let _ = writeln!(err, "{} records", records.len());
    }
    code
}
