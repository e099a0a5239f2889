//! Parameter resolution: command-line flag, then `KS_<KEY>` environment variable, then the
//! `--config` file, then the built-in default. Every resolved value is recorded for the manifest.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::CliError;

pub const ENV_PREFIX: &str = "KS_";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Setting {
    pub value: String,
    pub source: &'static str,
}

#[derive(Debug, Default)]
pub struct Resolver {
    file: BTreeMap<String, String>,
    used: BTreeSet<String>,
    pub record: BTreeMap<String, Setting>,
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("config line {}: expected `key = value`, got `{raw}`", lineno + 1)))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(CliError::Config(format!("config line {}: empty key", lineno + 1)));
        }
        if out.insert(key.to_string(), value.trim().to_string()).is_some() {
            return Err(CliError::Config(format!("config line {}: duplicate key `{key}`", lineno + 1)));
        }
    }
    Ok(out)
}

fn env_name(key: &str) -> String {
    format!("{ENV_PREFIX}{}", key.to_uppercase().replace('-', "_"))
}

impl Resolver {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let file = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("--config {}: {e}", p.display())))?;
                parse_config(&text)?
            }
            None => BTreeMap::new(),
        };
        Ok(Resolver {
            file,
            ..Default::default()
        })
    }

    fn lookup<T: FromStr>(&mut self, key: &str, flag: Option<T>) -> Result<Option<(T, String, &'static str)>, CliError>
    where
        T: Display,
        T::Err: Display,
    {
        if let Some(v) = flag {
            let s = v.to_string();
            return Ok(Some((v, s, "flag")));
        }
        let parse = |raw: &str, origin: String| {
            raw.trim()
                .parse::<T>()
                .map_err(|e| CliError::Config(format!("invalid value `{raw}` for --{key} (from {origin}): {e}")))
        };
        let env = env_name(key);
        if let Ok(raw) = std::env::var(&env) {
            let v = parse(&raw, env)?;
            return Ok(Some((v, raw.trim().to_string(), "env")));
        }
        if let Some(raw) = self.file.get(key).cloned() {
            self.used.insert(key.to_string());
            let v = parse(&raw, "config file".into())?;
            return Ok(Some((v, raw, "config")));
        }
        Ok(None)
    }

    /// Resolves `key`, falling back to `default`.
    pub fn value<T>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T, CliError>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let (v, value, source) = match self.lookup(key, flag)? {
            Some(found) => found,
            None => {
                let s = default.to_string();
                (default, s, "default")
            }
        };
        self.record.insert(key.to_string(), Setting { value, source });
        Ok(v)
    }

    /// Resolves `key` with no default; absent values are recorded as such.
    pub fn optional<T>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>, CliError>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let found = self.lookup(key, flag)?;
        let setting = match &found {
            Some((_, value, source)) => Setting {
                value: value.clone(),
                source,
            },
            None => Setting {
                value: String::new(),
                source: "unset",
            },
        };
        self.record.insert(key.to_string(), setting);
        Ok(found.map(|(v, _, _)| v))
    }

    /// Records a value that is fixed by the command rather than configurable.
    pub fn fixed(&mut self, key: &str, value: impl Display) {
        self.record.insert(
            key.to_string(),
            Setting {
                value: value.to_string(),
                source: "recipe",
            },
        );
    }

    pub fn unused_keys(&self) -> Vec<String> {
        self.file.keys().filter(|k| !self.used.contains(*k)).cloned().collect()
    }
}

/// Rejects a value outside its admissible range, naming the flag.
pub fn ensure(ok: bool, flag: &str, admissible: &str) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Config(format!("--{flag} must be {admissible}")))
    }
}

/// Comma-separated list of floats.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FloatList(pub Vec<f64>);

impl FromStr for FloatList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().is_empty() {
            return Ok(FloatList(Vec::new()));
        }
        s.split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
            .collect::<Result<_, _>>()
            .map(FloatList)
    }
}

impl Display for FloatList {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_file() {
        let map = parse_config("# defaults\nchi0 = 2.1\n\nD=0.5 # slower\n").unwrap();
        assert_eq!(map["chi0"], "2.1");
        assert_eq!(map["D"], "0.5");
        assert!(parse_config("chi0 2").is_err());
        assert!(parse_config("r = 1\nr = 2").is_err());
    }

    #[test]
    fn flag_beats_file_beats_default() {
        let mut r = Resolver {
            file: parse_config("zz_test_a = 3\nzz_test_b = 4").unwrap(),
            ..Default::default()
        };
        assert_eq!(r.value("zz_test_a", Some(1.0), 0.0).unwrap(), 1.0);
        assert_eq!(r.value("zz_test_b", None, 0.0).unwrap(), 4.0);
        assert_eq!(r.value("zz_test_c", None::<f64>, 7.5).unwrap(), 7.5);
        assert_eq!(r.record["zz_test_a"].source, "flag");
        assert_eq!(r.record["zz_test_b"].source, "config");
        assert_eq!(r.record["zz_test_c"].source, "default");
        assert_eq!(r.unused_keys(), vec!["zz_test_a".to_string()]);
    }

    #[test]
    fn bad_file_value_names_the_flag() {
        let mut r = Resolver {
            file: parse_config("zz_test_d = abc").unwrap(),
            ..Default::default()
        };
        let err = r.value("zz_test_d", None, 0.0).unwrap_err().to_string();
        assert!(err.contains("--zz_test_d"), "{err}");
    }

    #[test]
    fn float_lists_round_trip() {
        let l: FloatList = "1, 2.5,1e-3".parse().unwrap();
        assert_eq!(l.0, vec![1.0, 2.5, 1e-3]);
        assert_eq!(l.to_string().parse::<FloatList>().unwrap(), l);
    }
}
