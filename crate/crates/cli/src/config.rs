//! `key = value` configuration files. Keys are long flag names; flags given
//! on the command line take precedence.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: Option<&std::path::Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = crate::read_file(path)?;
        Self::parse(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", i + 1))?;
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// The flag value if given, else the config value, else `default`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.values.get(key) {
            Some(raw) => raw
                .parse()
                .map_err(|e| CliError::Input(format!("config key `{key}`: {e}"))),
            None => Ok(default),
        }
    }

    pub fn flag(&self, flag: bool, key: &str) -> Result<bool, CliError> {
        self.pick(flag.then_some(true), key, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let cfg = Config::parse("# study\nruns = 50\nseed=3\nperturb = true\n").unwrap();
        assert_eq!(cfg.pick(None, "runs", 1usize).unwrap(), 50);
        assert_eq!(cfg.pick(Some(7usize), "runs", 1).unwrap(), 7);
        assert_eq!(cfg.pick(None, "crews", 2usize).unwrap(), 2);
        assert!(cfg.flag(false, "perturb").unwrap());
        assert!(Config::parse("novalue\n").is_err());
        assert!(cfg.pick::<usize>(None, "perturb", 0).is_err());
    }
}
