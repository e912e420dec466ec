//! `key = value` configuration files and flag/file/default resolution.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, CliResult};

/// Keys accepted in a configuration file; each mirrors the flag of the same name.
pub const KEYS: &[&str] =
    &["n", "m", "p", "alpha", "seed", "replicates", "algo", "in", "out", "format", "threads", "eps", "epsp", "timing"];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    /// One `key = value` per line; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value, got {raw:?}", i + 1)))?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(CliError::Usage(format!("config line {}: unknown key {key:?}", i + 1)));
            }
            if values.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(CliError::Usage(format!("config line {}: duplicate key {key:?}", i + 1)));
            }
        }
        Ok(ConfigFile { values })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Flag,
    File,
    Default,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Flag => "flag",
            Source::File => "config",
            Source::Default => "default",
        })
    }
}

/// Resolves settings with precedence flag > config file > default and keeps
/// a record of every resolved value for echoing into output headers.
pub struct Resolver<'a> {
    file: &'a ConfigFile,
    entries: Vec<(&'static str, String, Source)>,
}

impl<'a> Resolver<'a> {
    pub fn new(file: &'a ConfigFile) -> Self {
        Resolver { file, entries: Vec::new() }
    }

    /// Raw string form, for values with custom parsers.
    pub fn raw(&mut self, key: &'static str, flag: Option<String>) -> Option<String> {
        let (value, source) = match (flag, self.file.get(key)) {
            (Some(v), _) => (v, Source::Flag),
            (None, Some(v)) => (v.to_string(), Source::File),
            (None, None) => return None,
        };
        self.entries.push((key, value.clone(), source));
        Some(value)
    }

    pub fn optional<T>(&mut self, key: &'static str, flag: Option<T>) -> CliResult<Option<T>>
    where
        T: FromStr + fmt::Display,
        T::Err: fmt::Display,
    {
        if let Some(v) = flag {
            self.entries.push((key, v.to_string(), Source::Flag));
            return Ok(Some(v));
        }
        match self.file.get(key) {
            Some(text) => {
                let v = text.parse::<T>().map_err(|e| CliError::Usage(format!("config key {key}: {e}")))?;
                self.entries.push((key, text.to_string(), Source::File));
                Ok(Some(v))
            }
            None => Ok(None),
        }
    }

    pub fn with_default<T>(&mut self, key: &'static str, flag: Option<T>, default: T) -> CliResult<T>
    where
        T: FromStr + fmt::Display,
        T::Err: fmt::Display,
    {
        match self.optional(key, flag)? {
            Some(v) => Ok(v),
            None => {
                self.entries.push((key, default.to_string(), Source::Default));
                Ok(default)
            }
        }
    }

    pub fn required<T>(&mut self, key: &'static str, flag: Option<T>) -> CliResult<T>
    where
        T: FromStr + fmt::Display,
        T::Err: fmt::Display,
    {
        self.optional(key, flag)?.ok_or_else(|| CliError::Usage(format!("missing required setting --{key}")))
    }

    /// Resolved `(key, value, source)` triples in resolution order.
    pub fn entries(&self) -> &[(&'static str, String, Source)] {
        &self.entries
    }
}

/// A count given as an integer or in scientific notation (`100000`, `1e5`).
pub fn parse_count(text: &str) -> Result<u64, String> {
    if let Ok(v) = text.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = text.parse().map_err(|_| format!("{text:?} is not a count"))?;
    if v.fract() != 0.0 || !(0.0..=9_007_199_254_740_992.0).contains(&v) {
        return Err(format!("{text:?} is not an exactly representable count"));
    }
    Ok(v as u64)
}
