//! Parameter resolution: command-line flags, then the config file, then
//! built-in defaults.
//!
//! The config file holds `key = value` lines; `#` starts a comment.
//! Recognized keys: `gamma`, `degree`, `nz`, `nw`, `n`, `s`, `seed`,
//! `seeds`, `function`. List-valued keys (`n`, `degree`) take
//! comma-separated values.

use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{io_error, CliError, CliResult};

pub const DEFAULT_GAMMA: f64 = 0.5;
pub const DEFAULT_NZ: usize = 15;
pub const DEFAULT_NW: usize = 10;
pub const DEFAULT_DEGREE: i32 = -1;
pub const MAX_CLI_DEGREE: i32 = 2;

const KNOWN_KEYS: &[&str] = &["gamma", "degree", "nz", "nw", "n", "s", "seed", "seeds", "function"];

#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    entries: HashMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path).map_err(|e| io_error(path.display(), e))?;
        Self::parse(&text).map_err(|m| CliError::Usage(format!("{}: {m}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut entries = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", i + 1))?;
            let key = k.trim().to_ascii_lowercase();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(format!("line {}: unknown key '{key}'", i + 1));
            }
            entries.insert(key, v.trim().to_string());
        }
        Ok(Self { entries })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        self.entries
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| CliError::Usage(format!("config key '{key}': cannot parse '{v}'")))
            })
            .transpose()
    }

    pub fn get_list<T: FromStr>(&self, key: &str) -> CliResult<Option<Vec<T>>> {
        self.entries
            .get(key)
            .map(|v| {
                v.split(',')
                    .map(|item| {
                        item.trim().parse::<T>().map_err(|_| {
                            CliError::Usage(format!("config key '{key}': cannot parse '{item}'"))
                        })
                    })
                    .collect()
            })
            .transpose()
    }
}

/// `flag`, else the config value, else `default`.
pub fn resolve<T: FromStr>(flag: Option<T>, config: &ConfigFile, key: &str, default: T) -> CliResult<T> {
    match flag {
        Some(v) => Ok(v),
        None => Ok(config.get(key)?.unwrap_or(default)),
    }
}

pub fn resolve_list<T: FromStr + Clone>(
    flag: &[T],
    config: &ConfigFile,
    key: &str,
    default: &[T],
) -> CliResult<Vec<T>> {
    if !flag.is_empty() {
        return Ok(flag.to_vec());
    }
    Ok(config.get_list(key)?.unwrap_or_else(|| default.to_vec()))
}

/// Checks one harmonic degree against the neighborhood size and the CLI cap.
pub fn check_degree(degree: i32, nz: usize) -> CliResult<()> {
    if degree < -1 {
        return Err(CliError::Usage(format!("--degree must be >= -1, got {degree}")));
    }
    let dim = ((degree + 1) * (degree + 1)) as usize;
    if nz < dim {
        return Err(CliError::Usage(format!(
            "--nz {nz} with --degree {degree} violates the necessary condition n_Z >= (L+1)^2 = {dim}"
        )));
    }
    if degree > MAX_CLI_DEGREE {
        return Err(CliError::Usage(format!(
            "--degree {degree} exceeds the supported maximum {MAX_CLI_DEGREE}"
        )));
    }
    Ok(())
}

pub fn check_gamma(gamma: f64) -> CliResult<()> {
    if gamma > 0.0 && gamma < 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--gamma must lie in (0, 1), got {gamma}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_key_values() {
        let c = ConfigFile::parse("# defaults\ngamma = 0.9\nn = 1000, 4000\n\ndegree=-1,2 # both\n").unwrap();
        assert_eq!(c.get::<f64>("gamma").unwrap(), Some(0.9));
        assert_eq!(c.get_list::<usize>("n").unwrap(), Some(vec![1000, 4000]));
        assert_eq!(c.get_list::<i32>("degree").unwrap(), Some(vec![-1, 2]));
        assert_eq!(c.get::<usize>("nz").unwrap(), None);
        assert!(ConfigFile::parse("bogus = 1").is_err());
        assert!(ConfigFile::parse("gamma 0.5").is_err());
        assert!(c.get::<usize>("gamma").is_err());
    }

    #[test]
    fn precedence() {
        let c = ConfigFile::parse("nz = 20\nnw = 12").unwrap();
        assert_eq!(resolve(Some(30), &c, "nz", DEFAULT_NZ).unwrap(), 30);
        assert_eq!(resolve(None, &c, "nz", DEFAULT_NZ).unwrap(), 20);
        assert_eq!(resolve(None, &c, "seed", 7u64).unwrap(), 7);
        assert_eq!(resolve_list::<usize>(&[], &c, "n", &[1000]).unwrap(), vec![1000]);
        assert_eq!(resolve_list(&[5usize], &c, "n", &[1000]).unwrap(), vec![5]);
    }

    #[test]
    fn degree_checks() {
        assert!(check_degree(2, 15).is_ok());
        assert!(check_degree(-1, 1).is_ok());
        match check_degree(3, 15) {
            Err(CliError::Usage(m)) => assert!(m.contains("n_Z >= (L+1)^2")),
            other => panic!("{other:?}"),
        }
        assert!(check_degree(3, 16).is_err());
        assert!(check_degree(-2, 15).is_err());
        assert!(check_gamma(0.96).is_ok());
        assert!(check_gamma(1.0).is_err());
    }
}
