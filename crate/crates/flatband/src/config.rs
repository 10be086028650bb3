//! Optional `key = value` configuration file.
//!
//! Blank lines and lines starting with `#` are ignored. Keys use the long
//! flag names with `_` or `-`. A flag given on the command line always wins
//! over the file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

pub const KNOWN_KEYS: &[&str] = &[
    "omega",
    "delta",
    "omega_m",
    "n_max",
    "tol",
    "workers",
    "output",
    "format",
    "delta_min",
    "delta_max",
    "delta_count",
    "delta_scale",
    "delta_values",
    "omega_min",
    "omega_max",
    "omega_count",
    "sites",
    "n_max_site",
];

/// Environment variable read for the worker count when no flag or file sets it.
pub const WORKERS_ENV: &str = "FLATBAND_WORKERS";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, UsageError> {
        let mut entries = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(UsageError(format!("config line {}: expected key = value", n + 1)));
            };
            let key = key.trim().replace('-', "_");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(UsageError(format!("config line {}: unknown key `{key}`", n + 1)));
            }
            if entries.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(UsageError(format!("config line {}: duplicate key `{key}`", n + 1)));
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self, UsageError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, UsageError> {
        self.entries
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| UsageError(format!("config key `{key}`: cannot parse `{v}`")))
            })
            .transpose()
    }

    /// Flag value, else file value, else `default`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, UsageError> {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.get(key)?.unwrap_or(default)),
        }
    }

    pub fn pick_opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, UsageError> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }
}

/// Flag, then file, then [`WORKERS_ENV`], then the machine's parallelism.
pub fn resolve_workers(flag: Option<usize>, file: &ConfigFile) -> Result<usize, UsageError> {
    let workers = match file.pick_opt(flag, "workers")? {
        Some(w) => w,
        None => match std::env::var(WORKERS_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| UsageError(format!("{WORKERS_ENV}: cannot parse `{v}`")))?,
            Err(_) => crate::parallel::default_workers(),
        },
    };
    if workers == 0 {
        return Err(UsageError("workers must be at least 1".into()));
    }
    Ok(workers)
}

/// Comma-separated list of numbers.
pub fn parse_list(text: &str) -> Result<Vec<f64>, UsageError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| UsageError(format!("cannot parse `{}` as a number", s.trim())))
        })
        .collect()
}
