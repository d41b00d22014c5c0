//! Run configuration: a flat `key = value` text format plus CLI overrides.
//!
//! Grammar, one entry per line:
//!
//! ```text
//! line   := blank | '#' comment | key '=' value
//! key    := name | name '[' index ']' | 'tol.' tolerance-name
//! ```
//!
//! Keys:
//!
//! | key | value |
//! |-----|-------|
//! | `command` | one of the CLI commands |
//! | `seed` | unsigned integer |
//! | `format` | `json`, `csv` or `text` |
//! | `output` | path |
//! | `cases` | randomized cases per algebra property |
//! | `scale0`, `scale1` | positive reals, anomaly endpoints |
//! | `p` | holomorphic form degree |
//! | `non_unitary` | `true` or `false` |
//! | `cut` | positive real spectral cut |
//! | `wall_time` | `true` or `false`; `false` writes 0 for reproducible reports |
//! | `tau[i]` | complex modulus of factor `i`, e.g. `0.3+1.2i` |
//! | `scale[i]` | positive area multiplier of factor `i` |
//! | `alpha[i]`, `beta[i]` | character of factor `i` (complex if `non_unitary`) |
//! | `tol.NAME` | tolerance override, see [`TOLERANCES`] |
//!
//! `[i]` may be omitted for factor 0. Factor indices must be contiguous.
//! Unknown keys and repeated keys are errors.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use clap::ValueEnum;
use holotorsion_core::torus::{TorusConfig, TorusError, TorusFactor};
use holotorsion_core::C64;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    VerifyAlgebra,
    VerifyMehler,
    VerifyParametrix,
    VerifyChernWeil,
    Torsion,
    Anomaly,
    Report,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::VerifyAlgebra => "verify-algebra",
            Command::VerifyMehler => "verify-mehler",
            Command::VerifyParametrix => "verify-parametrix",
            Command::VerifyChernWeil => "verify-chern-weil",
            Command::Torsion => "torsion",
            Command::Anomaly => "anomaly",
            Command::Report => "report",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Command::from_str(s, false).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Tolerance names and defaults.
pub const TOLERANCES: &[(&str, f64)] = &[
    ("chern_weil.trace_identity", 1e-12),
    ("chern_weil.b_derivative", 1e-8),
    ("mehler.routes", 1e-10),
    ("mehler.residual_ratio", 0.3),
    ("parametrix.poisson", 1e-12),
    ("parametrix.order_margin", 0.8),
    ("torsion.cut_independence", 1e-8),
    ("torsion.routes", 1e-8),
    ("variation.m0", 1e-6),
    ("variation.fd", 1e-4),
    ("variation.a_minus_one", 1e-9),
    ("variation.d_squared", 1e-12),
    ("anomaly.lhs", 1e-6),
];

#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances(BTreeMap<&'static str, f64>);

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances(TOLERANCES.iter().copied().collect())
    }
}

impl Tolerances {
    pub fn get(&self, name: &str) -> f64 {
        self.0[name]
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<(), ConfigError> {
        let key = TOLERANCES.iter().find(|t| t.0 == name).ok_or_else(|| ConfigError::UnknownTolerance(name.to_string()))?.0;
        if value.is_nan() || value <= 0.0 || !value.is_finite() {
            return Err(ConfigError::NonPositiveTolerance { name: name.to_string(), value });
        }
        self.0.insert(key, value);
        Ok(())
    }

    /// Parses `NAME=VALUE`.
    pub fn set_pair(&mut self, pair: &str) -> Result<(), ConfigError> {
        let (name, value) = pair.split_once('=').ok_or_else(|| ConfigError::InvalidValue { key: "tol".into(), value: pair.into(), reason: "expected NAME=VALUE".into() })?;
        let value = parse_f64("tol", value.trim())?;
        self.set(name.trim(), value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorSpec {
    pub tau: C64,
    pub scale: f64,
    pub alpha: C64,
    pub beta: C64,
}

impl Default for FactorSpec {
    fn default() -> Self {
        FactorSpec { tau: C64::new(0.0, 1.0), scale: 1.0, alpha: C64::new(0.5, 0.0), beta: C64::new(0.5, 0.0) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub factors: Vec<FactorSpec>,
    pub p: usize,
    pub non_unitary: bool,
    pub cut: Option<f64>,
}

impl Default for ModelSpec {
    fn default() -> Self {
        ModelSpec { factors: vec![FactorSpec::default()], p: 0, non_unitary: false, cut: None }
    }
}

impl ModelSpec {
    pub fn to_torus(&self) -> Result<TorusConfig, ConfigError> {
        let factors = self
            .factors
            .iter()
            .map(|f| {
                if f.alpha.im == 0.0 && f.beta.im == 0.0 {
                    TorusFactor::new(f.tau, f.scale, f.alpha.re, f.beta.re)
                } else {
                    TorusFactor::non_unitary(f.tau, f.scale, f.alpha, f.beta)
                }
            })
            .collect();
        let cfg = if self.non_unitary { TorusConfig::new_non_unitary(factors, self.p) } else { TorusConfig::new(factors, self.p) };
        cfg.map_err(ConfigError::Model)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub model: ModelSpec,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub scale0: f64,
    pub scale1: f64,
    /// Randomized cases per algebra property.
    pub cases: usize,
    pub record_wall_time: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: None,
            model: ModelSpec::default(),
            tolerances: Tolerances::default(),
            seed: 0,
            output: None,
            format: Format::Json,
            scale0: 1.0,
            scale1: 2.0,
            cases: 200,
            record_wall_time: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("invalid value `{value}` for `{key}`: {reason}")]
    InvalidValue { key: String, value: String, reason: String },
    #[error("factor indices must be contiguous from 0; missing factor {0}")]
    MissingFactor(usize),
    #[error("unknown tolerance `{0}`")]
    UnknownTolerance(String),
    #[error("tolerance `{name}` must be positive and finite, got {value}")]
    NonPositiveTolerance { name: String, value: f64 },
    #[error("scales must be positive and finite")]
    InvalidScales,
    #[error("invalid torus model: {0}")]
    Model(TorusError),
}

fn invalid(key: &str, value: &str, reason: &str) -> ConfigError {
    ConfigError::InvalidValue { key: key.into(), value: value.into(), reason: reason.into() }
}

fn parse_f64(key: &str, v: &str) -> Result<f64, ConfigError> {
    let x: f64 = v.parse().map_err(|_| invalid(key, v, "expected a real number"))?;
    if !x.is_finite() {
        return Err(invalid(key, v, "must be finite"));
    }
    Ok(x)
}

fn parse_bool(key: &str, v: &str) -> Result<bool, ConfigError> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(invalid(key, v, "expected true or false")),
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (also `i`, `-i`, exponents allowed).
pub fn parse_complex(s: &str) -> Option<C64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse().ok().filter(|x: &f64| x.is_finite()).map(|x| C64::new(x, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse().ok()?,
    };
    let z = C64::new(re.parse().ok()?, im);
    (z.re.is_finite() && z.im.is_finite()).then_some(z)
}

/// Splits `name[i]` into `(name, Some(i))`.
fn split_index(key: &str) -> Option<(&str, Option<usize>)> {
    match key.split_once('[') {
        None => Some((key, None)),
        Some((name, rest)) => {
            let idx = rest.strip_suffix(']')?.parse().ok()?;
            Some((name, Some(idx)))
        }
    }
}

impl RunConfig {
    /// Applies a config file's text on top of `self`.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        let mut seen = BTreeSet::new();
        let mut factors: BTreeMap<usize, FactorSpec> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or(ConfigError::Syntax { line })?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(ConfigError::Syntax { line });
            }
            let (name, index) = split_index(key).ok_or_else(|| ConfigError::UnknownKey { line, key: key.into() })?;
            let canonical = match index {
                Some(k) => format!("{name}[{k}]"),
                None if matches!(name, "tau" | "scale" | "alpha" | "beta") => format!("{name}[0]"),
                None => name.to_string(),
            };
            if !seen.insert(canonical) {
                return Err(ConfigError::DuplicateKey { line, key: key.into() });
            }
            let unknown = || ConfigError::UnknownKey { line, key: key.into() };
            if let Some(tol) = name.strip_prefix("tol.") {
                if index.is_some() {
                    return Err(unknown());
                }
                self.tolerances.set(tol, parse_f64(key, value)?)?;
                continue;
            }
            match (name, index) {
                ("tau" | "scale" | "alpha" | "beta", idx) => {
                    let f = factors.entry(idx.unwrap_or(0)).or_default();
                    match name {
                        "tau" => f.tau = parse_complex(value).ok_or_else(|| invalid(key, value, "expected a complex number like 0.3+1.2i"))?,
                        "scale" => f.scale = parse_f64(key, value)?,
                        "alpha" => f.alpha = parse_complex(value).ok_or_else(|| invalid(key, value, "expected a number"))?,
                        _ => f.beta = parse_complex(value).ok_or_else(|| invalid(key, value, "expected a number"))?,
                    }
                }
                (_, Some(_)) => return Err(unknown()),
                ("command", None) => self.command = Some(Command::parse(value).ok_or_else(|| invalid(key, value, "unknown command"))?),
                ("seed", None) => self.seed = value.parse().map_err(|_| invalid(key, value, "expected an unsigned integer"))?,
                ("format", None) => self.format = Format::from_str(value, false).map_err(|_| invalid(key, value, "expected json, csv or text"))?,
                ("output", None) => self.output = Some(PathBuf::from(value)),
                ("cases", None) => self.cases = value.parse().map_err(|_| invalid(key, value, "expected an unsigned integer"))?,
                ("scale0", None) => self.scale0 = parse_f64(key, value)?,
                ("scale1", None) => self.scale1 = parse_f64(key, value)?,
                ("p", None) => self.model.p = value.parse().map_err(|_| invalid(key, value, "expected an unsigned integer"))?,
                ("non_unitary", None) => self.model.non_unitary = parse_bool(key, value)?,
                ("cut", None) => self.model.cut = Some(parse_f64(key, value)?),
                ("wall_time", None) => self.record_wall_time = parse_bool(key, value)?,
                _ => return Err(unknown()),
            }
        }
        if !factors.is_empty() {
            let count = factors.keys().max().map_or(0, |m| m + 1);
            if let Some(missing) = (0..count).find(|k| !factors.contains_key(k)) {
                return Err(ConfigError::MissingFactor(missing));
            }
            self.model.factors = factors.into_values().collect();
        }
        Ok(())
    }

    /// Checks everything that can be checked before running.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.scale0 > 0.0 && self.scale1 > 0.0) {
            return Err(ConfigError::InvalidScales);
        }
        if let Some(c) = self.model.cut {
            if c.is_nan() || c <= 0.0 {
                return Err(invalid("cut", &c.to_string(), "must be positive"));
            }
        }
        self.model.to_torus().map(|_| ())
    }
}
