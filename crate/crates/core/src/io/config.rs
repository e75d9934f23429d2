//! Optional TOML configuration.
//!
//! ```toml
//! workers = 4
//! seeds_size = 5
//!
//! [fuel]
//! max_steps = 2000
//!
//! [[external]]
//! name = "aprove"
//! command = "aprove -m wst {file}"
//! format = "csrs"
//! ```
//!
//! Looked up at the explicit path, then `$UNRAVEL_CONFIG`, then
//! `./unravel.toml`. A missing default file is not an error.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::ctrs::Fuel;

pub const CONFIG_ENV: &str = "UNRAVEL_CONFIG";
pub const DEFAULT_CONFIG_FILE: &str = "unravel.toml";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config {path}: {source}")]
    Parse {
        path: PathBuf,
        source: toml::de::Error,
    },
    #[error("invalid config {path}: fuel bounds must be strictly positive")]
    Fuel { path: PathBuf },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FuelOverrides {
    pub max_level: Option<usize>,
    pub max_steps: Option<usize>,
    pub max_term_size: Option<usize>,
}

impl FuelOverrides {
    pub fn apply(&self, base: Fuel) -> Fuel {
        Fuel {
            max_level: self.max_level.unwrap_or(base.max_level),
            max_steps: self.max_steps.unwrap_or(base.max_steps),
            max_term_size: self.max_term_size.unwrap_or(base.max_term_size),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    /// The unraveled TRS `U(R)`.
    Trs,
    /// The context-sensitive unraveling `U_CS(R)`.
    #[default]
    Csrs,
}

/// An external prover. `{file}` in `command` is replaced by the exported
/// system; the first line of standard output should read YES, NO or MAYBE.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExternalTool {
    pub name: String,
    pub command: String,
    #[serde(default)]
    pub format: ExportFormat,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub fuel: FuelOverrides,
    pub workers: Option<usize>,
    pub seeds_size: Option<usize>,
    pub external: Vec<ExternalTool>,
}

impl Config {
    pub fn fuel(&self) -> Fuel {
        self.fuel.apply(Fuel::default())
    }
}

pub fn parse_config(text: &str, path: &Path) -> Result<Config, ConfigError> {
    let config: Config = toml::from_str(text).map_err(|source| ConfigError::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    if config.fuel().check().is_err() {
        return Err(ConfigError::Fuel {
            path: path.to_path_buf(),
        });
    }
    Ok(config)
}

pub fn load_config(explicit: Option<&Path>) -> Result<Config, ConfigError> {
    let from_env = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
    let (path, required) = match (explicit, from_env) {
        (Some(p), _) => (p.to_path_buf(), true),
        (None, Some(p)) => (p, true),
        (None, None) => (PathBuf::from(DEFAULT_CONFIG_FILE), false),
    };
    match std::fs::read_to_string(&path) {
        Ok(text) => parse_config(&text, &path),
        Err(e) if !required && e.kind() == std::io::ErrorKind::NotFound => Ok(Config::default()),
        Err(source) => Err(ConfigError::Read { path, source }),
    }
}
