//! Flags, config files and their merge.
//!
//! A config file is a flat TOML table whose keys are the long flag names
//! without the leading dashes (`d-star = 4`). Flags given on the command line
//! win over file entries.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use fqap::arith::Mode;
use fqap::spectral::Algorithm;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    HaarBall,
    Capset,
    Cascade,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Params {
    /// TOML file with default values for any of the other flags.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub d_star: Option<usize>,
    /// Plane dimension for `varnavides`.
    #[arg(long)]
    pub d_prime: Option<usize>,
    /// Ball level for `haar-ball`: radius `q^-k`.
    #[arg(long)]
    pub k: Option<usize>,
    /// Children kept per node for `cascade`.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub s: Option<f64>,
    /// Exact ball cost ratio `q^-s` as `num/den`, for `content`.
    #[arg(long)]
    pub ratio: Option<String>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub alpha0: Option<f64>,
    #[arg(long)]
    pub mode: Option<Mode>,
    /// Measure file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Point-set file, where a command accepts a set instead of a measure.
    #[arg(long)]
    pub set: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub algorithm: Option<Algorithm>,
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    #[arg(long)]
    pub limit: Option<usize>,
    #[arg(long)]
    pub repetitions: Option<usize>,
}

fn to_map(p: &Params) -> Map<String, Value> {
    match serde_json::to_value(p).expect("params serialize") {
        Value::Object(map) => map.into_iter().filter(|(_, v)| !v.is_null()).collect(),
        _ => unreachable!("params serialize to an object"),
    }
}

fn read_config(path: &Path) -> Result<Map<String, Value>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("config {}: {e}", path.display())))?;
    let parsed: Params =
        toml::from_str(&text).map_err(|e| CliError::usage(format!("config {}: {e}", path.display())))?;
    Ok(to_map(&parsed))
}

/// Merged parameters plus a record of every value a command resolved.
pub struct Ctx {
    command: &'static str,
    values: Map<String, Value>,
    resolved: BTreeMap<String, Value>,
}

impl Ctx {
    /// Merges flags over the config file and rejects keys the command does
    /// not read.
    pub fn new(command: &'static str, flags: &Params, allowed: &[&str]) -> Result<Self, CliError> {
        let mut values = match &flags.config {
            Some(path) => read_config(path)?,
            None => Map::new(),
        };
        values.extend(to_map(flags));
        let common = ["input", "output"];
        for key in values.keys() {
            if !allowed.contains(&key.as_str()) && !common.contains(&key.as_str()) {
                return Err(CliError::usage(format!("`{key}` is not a parameter of {command}")));
            }
        }
        Ok(Ctx {
            command,
            values,
            resolved: BTreeMap::new(),
        })
    }

    pub fn command(&self) -> &'static str {
        self.command
    }

    pub fn opt<T: DeserializeOwned + Serialize>(&mut self, key: &str) -> Result<Option<T>, CliError> {
        let Some(v) = self.values.get(key) else {
            return Ok(None);
        };
        let parsed: T = serde_json::from_value(v.clone())
            .map_err(|e| CliError::usage(format!("bad value for `{key}`: {e}")))?;
        self.resolved.insert(key.to_string(), v.clone());
        Ok(Some(parsed))
    }

    pub fn req<T: DeserializeOwned + Serialize>(&mut self, key: &str) -> Result<T, CliError> {
        self.opt(key)?
            .ok_or_else(|| CliError::usage(format!("{} needs `--{key}`", self.command)))
    }

    pub fn or<T: DeserializeOwned + Serialize>(&mut self, key: &str, default: T) -> Result<T, CliError> {
        match self.opt(key)? {
            Some(v) => Ok(v),
            None => {
                self.resolved
                    .insert(key.to_string(), serde_json::to_value(&default).expect("default serializes"));
                Ok(default)
            }
        }
    }

    /// Records a value that was derived rather than given.
    pub fn record(&mut self, key: &str, value: impl Serialize) {
        self.resolved
            .insert(key.to_string(), serde_json::to_value(value).expect("value serializes"));
    }

    pub fn resolved(&self) -> &BTreeMap<String, Value> {
        &self.resolved
    }
}
