//! Optional TOML configuration and its resolution against command-line
//! flags. Flags win over the config file; anything still unset falls back
//! to the bundled defaults.

use std::path::{Path, PathBuf};

use gradeband::{BandMappingConfig, WordLists};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CliConfig {
    #[serde(default)]
    pub lists: ListPaths,
    /// Band-mapping TOML path, resolved relative to the config file.
    pub mapping: Option<PathBuf>,
    #[serde(default)]
    pub provider: ProviderConfig,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ListPaths {
    pub dale_chall: Option<PathBuf>,
    pub spache: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProviderConfig {
    /// "mock" (default) or "http".
    pub kind: Option<String>,
    pub model: Option<String>,
    pub endpoint: Option<String>,
    /// Name of the environment variable holding the API key.
    pub api_key_env: Option<String>,
    pub requests_per_second: Option<f64>,
    pub burst: Option<u32>,
    pub max_attempts: Option<u32>,
}

impl CliConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(CliConfig::default());
        };
        let raw = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        let mut config: CliConfig = toml::from_str(&raw)
            .map_err(|e| CliError::Validation(format!("bad config {}: {e}", path.display())))?;
        // paths in the file are relative to the file, not the working dir
        if let Some(base) = path.parent() {
            for entry in [
                &mut config.lists.dale_chall,
                &mut config.lists.spache,
                &mut config.mapping,
            ]
            .into_iter()
            .flatten()
            {
                if entry.is_relative() {
                    *entry = base.join(entry.as_path());
                }
            }
        }
        Ok(config)
    }
}

/// Word lists and band mapping after config and flags are reconciled.
pub struct Resolved {
    pub lists: WordLists,
    pub mapping: BandMappingConfig,
}

pub fn resolve(
    config: &CliConfig,
    dale_chall: Option<&Path>,
    spache: Option<&Path>,
    mapping: Option<&Path>,
) -> Result<Resolved, CliError> {
    let dale_chall = dale_chall.or(config.lists.dale_chall.as_deref());
    let spache = spache.or(config.lists.spache.as_deref());
    let lists = match (dale_chall, spache) {
        (None, None) => WordLists::bundled(),
        (Some(dc), Some(sp)) => WordLists::from_paths(dc, sp)?,
        _ => {
            return Err(CliError::Validation(
                "replacement word lists come as a pair: set both --dale-chall and --spache".into(),
            ))
        }
    };
    let mapping = match mapping.or(config.mapping.as_deref()) {
        Some(path) => BandMappingConfig::from_path(path)?,
        None => BandMappingConfig::default(),
    };
    Ok(Resolved { lists, mapping })
}
