//! Experiment configuration: a flat `key=value` file overlaid by command-line
//! flags. Real-valued keys accept arithmetic such as `pi/2` or `sqrt(0.5)`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;

pub const KEYS: [&str; 16] = [
    "function",
    "a",
    "b",
    "c",
    "d",
    "eps",
    "n0",
    "ratio",
    "count",
    "out",
    "format",
    "suite",
    "compat_override",
    "threads",
    "residuals",
    "series_file",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    LowerBound,
    Monotone,
    Logconcavity,
    UpperBound,
    All,
}

impl Suite {
    pub fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub function: Option<String>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub c: Option<f64>,
    pub d: f64,
    /// `None` selects the cutoff automatically.
    pub eps: Option<f64>,
    pub n0: u64,
    pub ratio: f64,
    pub count: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub suite: Suite,
    pub compat_override: bool,
    pub threads: Option<usize>,
    pub residuals: Option<PathBuf>,
    pub series_file: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            function: None,
            a: None,
            b: None,
            c: None,
            d: 1.0,
            eps: None,
            n0: 1000,
            ratio: 2.0,
            count: 11,
            out: None,
            format: Format::Csv,
            suite: Suite::All,
            compat_override: false,
            threads: None,
            residuals: None,
            series_file: None,
        }
    }
}

/// Raw `key -> value` entries before interpretation.
pub type RawConfig = BTreeMap<String, String>;

/// Parses `key=value` lines. Blank lines and `#` comments are ignored.
pub fn parse_config_text(text: &str) -> Result<RawConfig, CliError> {
    let mut raw = RawConfig::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| CliError::Config(format!("line {}: expected key=value", i + 1)))?;
        let key = key.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Config(format!("line {}: unknown key `{key}`", i + 1)));
        }
        raw.insert(key, value.trim().to_owned());
    }
    Ok(raw)
}

pub fn read_config_file(path: &Path) -> Result<RawConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text)
}

/// Evaluates a real expression (`pi/2`, `sqrt(0.5)`, `1.1/sqrt(2)`).
pub fn parse_real(key: &str, value: &str) -> Result<f64, CliError> {
    let v = meval::eval_str(value).map_err(|e| CliError::Config(format!("{key}: cannot evaluate `{value}`: {e}")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Config(format!("{key}: `{value}` is not finite")))
    }
}

fn parse_int<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.parse().map_err(|_| CliError::Config(format!("{key}: expected a non-negative integer, got `{value}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, CliError> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(CliError::Config(format!("{key}: expected true or false, got `{value}`"))),
    }
}

impl ExperimentConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        for (key, value) in raw {
            match key.as_str() {
                "function" => cfg.function = Some(value.clone()),
                "a" => cfg.a = Some(parse_real(key, value)?),
                "b" => cfg.b = Some(parse_real(key, value)?),
                "c" => cfg.c = Some(parse_real(key, value)?),
                "d" => cfg.d = parse_real(key, value)?,
                "eps" => cfg.eps = if value == "auto" { None } else { Some(parse_real(key, value)?) },
                "n0" => cfg.n0 = parse_int(key, value)?,
                "ratio" => cfg.ratio = parse_real(key, value)?,
                "count" => cfg.count = parse_int(key, value)?,
                "out" => cfg.out = Some(PathBuf::from(value)),
                "format" => {
                    cfg.format = match value.as_str() {
                        "csv" => Format::Csv,
                        "json" => Format::Json,
                        _ => return Err(CliError::Config(format!("format: expected csv or json, got `{value}`"))),
                    }
                }
                "suite" => {
                    cfg.suite = match value.as_str() {
                        "lower_bound" => Suite::LowerBound,
                        "monotone" => Suite::Monotone,
                        "logconcavity" => Suite::Logconcavity,
                        "upper_bound" => Suite::UpperBound,
                        "all" => Suite::All,
                        _ => return Err(CliError::Config(format!("suite: unknown suite `{value}`"))),
                    }
                }
                "compat_override" => cfg.compat_override = parse_bool(key, value)?,
                "threads" => cfg.threads = Some(parse_int(key, value)?),
                "residuals" => cfg.residuals = Some(PathBuf::from(value)),
                "series_file" => cfg.series_file = Some(PathBuf::from(value)),
                other => return Err(CliError::Config(format!("unknown key `{other}`"))),
            }
        }
        if cfg.count == 0 {
            return Err(CliError::Config("count must be at least 1".into()));
        }
        Ok(cfg)
    }

    pub fn function(&self) -> Result<&str, CliError> {
        self.function.as_deref().ok_or_else(|| CliError::Config("missing `function`".into()))
    }

    pub fn shifts(&self) -> Result<(f64, f64, f64), CliError> {
        match (self.a, self.b, self.c) {
            (Some(a), Some(b), Some(c)) => Ok((a, b, c)),
            _ => Err(CliError::Config("`a`, `b` and `c` are required".into())),
        }
    }
}
