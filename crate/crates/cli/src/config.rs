//! Flat `key = value` run configuration.
//!
//! Later layers override earlier ones: preset, then config file, then the
//! `LPLAB_SEED` environment variable, then command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{config, CliError, Result};
use crate::presets::{find_preset, Target};

/// Keys that steer the run rather than feed a verifier.
pub const CONTROL_KEYS: [&str; 6] = ["target", "preset", "seed", "output", "format", "emit_profile"];

/// Parses a config file. Blank lines and `#` comments are skipped; keys may not
/// repeat. Errors name the file and line.
pub fn parse_config(text: &str, source_name: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| lplab::Error::Parse {
            source_name: source_name.to_string(),
            line: i + 1,
            message: msg,
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| at(format!("expected key = value, found {line:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(at(format!("bad key {key:?}")).into());
        }
        if value.is_empty() {
            return Err(at(format!("empty value for {key}")).into());
        }
        if out.insert(key.to_string(), value.to_string()).is_some() {
            return Err(at(format!("duplicate key {key}")).into());
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(config(format!("unknown format {s:?}; expected json or csv"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

/// Verifier parameters with typed accessors.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params(BTreeMap<String, String>);

impl Params {
    pub fn new(map: BTreeMap<String, String>) -> Self {
        Params(map)
    }

    pub fn set(&mut self, key: &str, value: &str) {
        self.0.insert(key.to_string(), value.to_string());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key).ok_or_else(|| config(format!("missing parameter {key}")))
    }

    fn parsed<T: FromStr>(&self, key: &str, what: &str) -> Result<Option<T>> {
        self.get(key)
            .map(|v| v.parse::<T>().map_err(|_| config(format!("{key} = {v:?} is not {what}"))))
            .transpose()
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        self.f64_opt(key)?.ok_or_else(|| config(format!("missing parameter {key}")))
    }

    pub fn f64_opt(&self, key: &str) -> Result<Option<f64>> {
        self.parsed(key, "a number")
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.f64_opt(key)?.unwrap_or(default))
    }

    pub fn usize_opt(&self, key: &str) -> Result<Option<usize>> {
        self.parsed(key, "a nonnegative integer")
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        Ok(self.usize_opt(key)?.unwrap_or(default))
    }

    /// A comma-separated list of numbers.
    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>> {
        self.require(key)?
            .split(',')
            .map(|t| {
                t.trim()
                    .parse()
                    .map_err(|_| config(format!("{key}: {t:?} is not a number")))
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub target: Target,
    pub preset: Option<String>,
    pub params: Params,
    pub seed: u64,
    pub output: Option<String>,
    /// `None` leaves the choice to the command: JSON for one report, CSV for sweeps.
    pub format: Option<Format>,
    pub emit_profile: Option<String>,
}

/// The sources a [`RunConfig`] is assembled from, lowest precedence first.
#[derive(Clone, Debug, Default)]
pub struct Layers {
    /// Contents and name of a config file.
    pub file: Option<(String, String)>,
    /// Value of `LPLAB_SEED`, if set.
    pub env_seed: Option<String>,
    /// `key = value` pairs from flags.
    pub flags: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn build(layers: &Layers) -> Result<RunConfig> {
        let file = match &layers.file {
            Some((text, name)) => parse_config(text, name)?,
            None => BTreeMap::new(),
        };
        let pick = |key: &str| layers.flags.get(key).or_else(|| file.get(key)).cloned();

        let preset = pick("preset");
        let mut merged = BTreeMap::new();
        if let Some(name) = &preset {
            let p = find_preset(name)?;
            merged.insert("target".to_string(), p.target.to_string());
            for (k, v) in p.params {
                merged.insert(k.to_string(), v.to_string());
            }
        }
        merged.extend(file);
        if let Some(seed) = &layers.env_seed {
            merged.insert("seed".to_string(), seed.clone());
        }
        merged.extend(layers.flags.clone());

        let target: Target = merged
            .remove("target")
            .ok_or_else(|| config("no target given (use --target or --preset)"))?
            .parse()?;
        merged.remove("preset");
        let seed = match merged.remove("seed") {
            Some(s) => s
                .trim()
                .parse()
                .map_err(|_| config(format!("seed {s:?} is not a nonnegative integer")))?,
            None => 0,
        };
        let output = merged.remove("output");
        let format = merged.remove("format").map(|f| f.parse()).transpose()?;
        let emit_profile = merged.remove("emit_profile");
        let params = Params::new(merged);
        target.check_keys(params.keys())?;
        Ok(RunConfig {
            target,
            preset,
            params,
            seed,
            output,
            format,
            emit_profile,
        })
    }
}

/// Parses `key=v1,v2,...` into a sweep axis.
pub fn parse_range(text: &str) -> Result<(String, Vec<String>)> {
    let (key, values) = text
        .split_once('=')
        .ok_or_else(|| config(format!("range {text:?} is not key=v1,v2,...")))?;
    let values: Vec<String> = values
        .split(',')
        .map(|v| v.trim().to_string())
        .filter(|v| !v.is_empty())
        .collect();
    if values.is_empty() {
        return Err(config(format!("range for {} is empty", key.trim())));
    }
    Ok((key.trim().to_string(), values))
}
