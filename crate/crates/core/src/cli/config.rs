//! Flat `key = value` configuration files.
//!
//! Keys use the long flag names without the leading dashes (`z1`,
//! `delta-eps`, `tau-min`, ...); underscores are accepted in place of
//! dashes. `#` starts a comment. Command-line flags override file values.

use std::collections::BTreeMap;
use std::path::Path;

pub const KNOWN_KEYS: &[&str] = &[
    "statistics",
    "z1",
    "z2",
    "n",
    "delta-eps",
    "eps1",
    "alpha",
    "volume",
    "tau",
    "tau-min",
    "tau-max",
    "points",
    "log",
    "raw",
    "out",
    "format",
];

fn normalise_key(key: &str) -> String {
    let dashed = key.replace('_', "-");
    if KNOWN_KEYS.contains(&dashed.as_str()) {
        dashed
    } else {
        key.replace('_', "")
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", i + 1))?;
            let key = normalise_key(key.trim());
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(format!("line {}: unknown key '{key}'", i + 1));
            }
            let value = value.trim();
            if value.is_empty() {
                return Err(format!("line {}: empty value for '{key}'", i + 1));
            }
            if entries.insert(key.clone(), value.to_string()).is_some() {
                return Err(format!("line {}: duplicate key '{key}'", i + 1));
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, String>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| v.parse::<T>().map_err(|e| format!("config key '{key}' = '{v}': {e}")))
            .transpose()
    }
}
