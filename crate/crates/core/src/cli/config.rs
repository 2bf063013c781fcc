//! The `injury` run configuration file.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Deserialize;

use super::{read, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum InjuryMode {
    /// Build `f` with `cp_f` escaping every catalog program.
    #[default]
    Finite,
    /// Build a copy against functional triples on the tree of strategies.
    Tree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OpponentKind {
    /// Φ, Ψ query the first marker; W reacts to it.
    Cooperating,
    /// W stays empty.
    Static,
    /// Ψ never converges to 0.
    Silent,
}

/// Fields of the TOML file. Relative paths are taken from the file's
/// directory.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InjuryConfig {
    #[serde(default)]
    pub mode: InjuryMode,
    pub spec: Option<PathBuf>,
    #[serde(default)]
    pub catalog: Vec<PathBuf>,
    pub stages: Option<u64>,
    pub m_cap: Option<u64>,
    /// Generates the tree-mode spec when none is given.
    pub seed: Option<u64>,
    /// One triple per entry, requirement 0 first.
    #[serde(default)]
    pub opponents: Vec<OpponentKind>,
    #[serde(default)]
    pub case_a: bool,
}

impl InjuryConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = read(path)?;
        let mut c: InjuryConfig =
            toml::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        if let Some(s) = &c.spec {
            c.spec = Some(base.join(s));
        }
        for p in &mut c.catalog {
            *p = base.join(&*p);
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_paths_follow_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "mode = \"tree\"\nspec = \"f.spec\"\nopponents = [\"static\", \"silent\"]\nstages = 9\n").unwrap();
        let c = InjuryConfig::load(&path).unwrap();
        assert_eq!(c.mode, InjuryMode::Tree);
        assert_eq!(c.spec, Some(dir.path().join("f.spec")));
        assert_eq!(c.opponents, vec![OpponentKind::Static, OpponentKind::Silent]);
        assert_eq!(c.stages, Some(9));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "stagez = 3\n").unwrap();
        assert_eq!(InjuryConfig::load(&path).unwrap_err().code, super::super::EXIT_CONFIG);
    }
}
