//! Flat `key = value` configuration files.
//!
//! Keys are the long flag names, with `-` or `_` as separator. Blank lines
//! and `#` comments are ignored. Flags on the command line win over the
//! file, and the file wins over built-in defaults.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};

pub const CONFIG_ENV: &str = "RELPOLY_CONFIG";

pub const KEYS: &[&str] = &[
    "graph",
    "directed",
    "rule",
    "source",
    "target",
    "threshold",
    "kmin",
    "beta_kmin",
    "kmax",
    "beta_kmax",
    "mode",
    "truth",
    "samples",
    "seed",
    "workers",
    "exact",
    "gap_tol",
    "cost_bits",
    "criterion",
    "max_measurements",
    "likelihood_samples",
    "sigma",
    "grid",
    "out",
];

#[derive(Debug, Clone, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("config line {}: expected `key = value`", idx + 1);
            };
            let key = key.trim().replace('-', "_");
            if !KEYS.contains(&key.as_str()) {
                bail!("config line {}: unknown key `{key}`", idx + 1);
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn get<T>(&self, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        self.values
            .get(key)
            .map(|v| v.parse::<T>().map_err(|e| anyhow::anyhow!("config key `{key}` = `{v}`: {e}")))
            .transpose()
    }

    /// Command-line value, else config value.
    pub fn pick<T>(&self, cli: Option<T>, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        match cli {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    /// A presence flag: set on the command line or `true` in the file.
    pub fn flag(&self, cli: bool, key: &str) -> Result<bool> {
        Ok(cli || self.get::<bool>(key)?.unwrap_or(false))
    }

    pub fn pick_enum<T: clap::ValueEnum>(&self, cli: Option<T>, key: &str) -> Result<Option<T>> {
        if cli.is_some() {
            return Ok(cli);
        }
        self.values
            .get(key)
            .map(|v| T::from_str(v, true).map_err(|e| anyhow::anyhow!("config key `{key}`: {e}")))
            .transpose()
    }
}
