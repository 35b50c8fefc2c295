use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::CliError;

/// Environment variable overriding the default size caps.
pub const CAP_ENV: &str = "BOXLAB_CAP";

/// Resolved experiment parameters: config file values overlaid by flags.
/// Every value read (including defaults) is recorded for report provenance.
#[derive(Debug, Clone, Default)]
pub struct Params {
    values: BTreeMap<String, String>,
}

fn normalise(key: &str) -> String {
    key.trim().replace('-', "_")
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Config(format!("line {}: expected key=value, got {line:?}", i + 1)));
        };
        let key = normalise(k);
        if key.is_empty() {
            return Err(CliError::Config(format!("line {}: empty key", i + 1)));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

impl Params {
    pub fn resolve(config: Option<&Path>, flags: Vec<(&str, Option<String>)>) -> Result<Self, CliError> {
        let mut values = match config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                parse_config(&text)?
            }
            None => BTreeMap::new(),
        };
        for (k, v) in flags {
            if let Some(v) = v {
                values.insert(normalise(k), v);
            }
        }
        Ok(Self { values })
    }

    fn parsed<T: FromStr>(&mut self, key: &str, default: Option<T>) -> Result<T, CliError>
    where
        T: ToString,
    {
        match self.values.get(key) {
            Some(raw) => raw
                .parse()
                .map_err(|_| CliError::Config(format!("parameter {key} has invalid value {raw:?}"))),
            None => {
                let v = default.ok_or_else(|| CliError::Config(format!("missing required parameter {key}")))?;
                self.values.insert(key.to_string(), v.to_string());
                Ok(v)
            }
        }
    }

    pub fn usize(&mut self, key: &str, default: usize) -> Result<usize, CliError> {
        self.parsed(key, Some(default))
    }

    pub fn u64(&mut self, key: &str, default: u64) -> Result<u64, CliError> {
        self.parsed(key, Some(default))
    }

    pub fn f64(&mut self, key: &str, default: f64) -> Result<f64, CliError> {
        self.parsed(key, Some(default))
    }

    pub fn string(&mut self, key: &str, default: &str) -> Result<String, CliError> {
        self.parsed(key, Some(default.to_string()))
    }

    pub fn required(&mut self, key: &str) -> Result<String, CliError> {
        self.parsed::<String>(key, None)
    }

    pub fn optional(&self, key: &str) -> Option<String> {
        self.values.get(key).cloned()
    }

    pub fn flag(&mut self, key: &str) -> Result<bool, CliError> {
        self.parsed(key, Some(false))
    }

    /// Comma-separated list.
    pub fn list<T: FromStr>(&mut self, key: &str, default: &str) -> Result<Vec<T>, CliError> {
        let raw = self.string(key, default)?;
        raw.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse().map_err(|_| CliError::Config(format!("parameter {key} has invalid entry {s:?}"))))
            .collect()
    }

    /// Size cap: the `cap` parameter, else `BOXLAB_CAP`, else the default.
    pub fn cap(&mut self, default: usize) -> Result<usize, CliError> {
        let fallback = match std::env::var(CAP_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| CliError::Config(format!("{CAP_ENV} has invalid value {v:?}")))?,
            Err(_) => default,
        };
        self.usize("cap", fallback)
    }

    /// `key=value` pairs joined by `;`, sorted by key.
    pub fn provenance(&self) -> String {
        self.values.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
    }

    pub fn as_map(&self) -> &BTreeMap<String, String> {
        &self.values
    }
}
