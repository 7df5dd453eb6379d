//! `key = value` configuration files. Command-line flags take precedence.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::{Error, Result};

pub const KNOWN_KEYS: [&str; 18] = [
    "n", "kmax", "samples", "seed", "field", "A", "B", "C", "amplitude", "lemma", "dt", "t-end", "tol",
    "manifest", "perturb-density", "n-max", "f0", "f1",
];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<ConfigFile> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("config line {}: expected key = value", lineno + 1)))?;
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(Error::Parse(format!("config line {}: unknown key {key:?}", lineno + 1)));
            }
            values.insert(key.to_string(), value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn load(path: &Path) -> Result<ConfigFile> {
        ConfigFile::parse(&fs::read_to_string(path)?)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.values
            .get(key)
            .map(|v| v.parse().map_err(|_| Error::Parse(format!("config key {key}: bad value {v:?}"))))
            .transpose()
    }

    /// Flag value if given, else the file value, else `default`.
    pub fn resolve<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T> {
        Ok(match flag {
            Some(v) => v,
            None => self.get(key)?.unwrap_or(default),
        })
    }

    pub fn resolve_opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        Ok(match flag {
            Some(v) => Some(v),
            None => self.get(key)?,
        })
    }
}

pub fn check_grid_size(n: usize) -> Result<()> {
    if n >= 8 && n.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::InvalidGrid(n))
    }
}

pub fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{name} must be positive, got {v}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_resolves() {
        let c = ConfigFile::parse("# run\nn = 16\nfield=abc  # comment\n\ntol = 1e-9\n").unwrap();
        assert_eq!(c.get::<usize>("n").unwrap(), Some(16));
        assert_eq!(c.resolve(Some(32usize), "n", 8).unwrap(), 32);
        assert_eq!(c.resolve(None, "n", 8usize).unwrap(), 16);
        assert_eq!(c.resolve(None, "seed", 7u64).unwrap(), 7);
        assert_eq!(c.resolve_opt::<String>(None, "field").unwrap().as_deref(), Some("abc"));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ConfigFile::parse("n 16").is_err());
        assert!(ConfigFile::parse("colour = red").is_err());
        let c = ConfigFile::parse("n = sixteen").unwrap();
        assert!(c.get::<usize>("n").is_err());
        assert!(check_grid_size(12).is_err());
        assert!(check_grid_size(4).is_err());
        assert!(check_positive("tol", 0.0).is_err());
    }
}
