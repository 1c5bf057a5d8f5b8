//! Flat `key = value` experiment configuration.
//!
//! Lines starting with `#` and blank lines are ignored. Unknown and
//! duplicate keys are rejected. Command-line overrides are applied on top
//! of the file before validation.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use crate::spec::ScheduleSpec;

/// Every recognized key, its default (empty when required or
/// context-dependent) and a one-line description.
pub const KEYS: &[(&str, &str, &str)] = &[
    ("objective", "", "quadratic | logistic (required)"),
    ("T", "", "number of iterations (required)"),
    ("n", "", "number of workers (required)"),
    (
        "beta",
        "1",
        "step-size offset, or `auto` for the smallest admissible value",
    ),
    ("schedules", "sync; oneshot", "`;`-separated schedule specs"),
    ("trials", "1", "independent repetitions"),
    ("seed", "0", "master seed"),
    (
        "x0",
        "ones (quadratic), zeros (logistic)",
        "ones | zeros | <number>",
    ),
    (
        "stride",
        "auto",
        "metric recording stride (auto: 1 up to T = 10^4)",
    ),
    ("out", "", "output directory (run) or file (speedup, bound)"),
    ("d", "3", "quadratic: dimension"),
    ("c1", "9", "quadratic: multiplicative noise variance"),
    (
        "c2",
        "0.25",
        "quadratic: additive per-coordinate noise variance",
    ),
    ("data", "", "logistic: LIBSVM file (required)"),
    ("features", "", "logistic: feature dimension hint"),
    ("lambda", "0.05", "logistic: L2 weight"),
    ("batch", "1", "logistic: samples per stochastic gradient"),
    (
        "fstar",
        "",
        "logistic: known optimal value (estimated when absent)",
    ),
    (
        "fstar_tol",
        "1e-8",
        "logistic: gradient tolerance (relative to lambda) for estimating F*",
    ),
    (
        "noise_c",
        "",
        "bound: relative noise coefficient (quadratic: c1)",
    ),
    (
        "noise_sigma2",
        "",
        "bound: additive noise variance (quadratic: d * c2)",
    ),
    (
        "xi0",
        "",
        "bound: initial suboptimality (default F(x0) - F*)",
    ),
    (
        "speedup_workers",
        "5,10,20,40",
        "speedup: worker counts, each run with R = n",
    ),
];

const QUADRATIC_ONLY: &[&str] = &["d", "c1", "c2"];
const LOGISTIC_ONLY: &[&str] = &["data", "features", "lambda", "batch", "fstar", "fstar_tol"];

/// Where a value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    Flag,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Line(n) => write!(f, "line {n}"),
            Self::Flag => write!(f, "command line"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("{origin}: unknown key `{key}`")]
    UnknownKey { key: String, origin: Origin },
    #[error("duplicate key `{key}` on lines {first} and {second}")]
    Duplicate {
        key: String,
        first: usize,
        second: usize,
    },
    #[error("{origin}: key `{key}`: {reason}")]
    Invalid {
        key: String,
        origin: Origin,
        reason: String,
    },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("key `{key}` ({origin}) does not apply to objective {objective}")]
    NotApplicable {
        key: String,
        origin: Origin,
        objective: &'static str,
    },
}

/// Parsed but unvalidated key/value pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, (String, Origin)>,
}

fn known(key: &str) -> bool {
    KEYS.iter().any(|(k, _, _)| *k == key)
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut raw = Self::default();
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: lineno,
                text: trimmed.to_string(),
            })?;
            let key = key.trim();
            if key.is_empty() {
                return Err(ConfigError::Syntax {
                    line: lineno,
                    text: trimmed.to_string(),
                });
            }
            if !known(key) {
                return Err(ConfigError::UnknownKey {
                    key: key.to_string(),
                    origin: Origin::Line(lineno),
                });
            }
            if let Some((_, Origin::Line(first))) = raw.entries.get(key) {
                return Err(ConfigError::Duplicate {
                    key: key.to_string(),
                    first: *first,
                    second: lineno,
                });
            }
            raw.entries.insert(
                key.to_string(),
                (value.trim().to_string(), Origin::Line(lineno)),
            );
        }
        Ok(raw)
    }

    /// Overrides (or adds) a key from the command line.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), ConfigError> {
        if !known(key) {
            return Err(ConfigError::UnknownKey {
                key: key.to_string(),
                origin: Origin::Flag,
            });
        }
        self.entries
            .insert(key.to_string(), (value.into(), Origin::Flag));
        Ok(())
    }

    fn get(&self, key: &str) -> Option<(&str, Origin)> {
        self.entries.get(key).map(|(v, o)| (v.as_str(), *o))
    }

    fn parse_value<T: std::str::FromStr>(
        &self,
        key: &'static str,
        expected: &str,
    ) -> Result<Option<T>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some((v, origin)) => v.parse::<T>().map(Some).map_err(|_| ConfigError::Invalid {
                key: key.to_string(),
                origin,
                reason: format!("expected {expected}, got `{v}`"),
            }),
        }
    }

    fn require<T: std::str::FromStr>(
        &self,
        key: &'static str,
        expected: &str,
    ) -> Result<T, ConfigError> {
        self.parse_value(key, expected)?
            .ok_or(ConfigError::Missing(key))
    }

    fn invalid(&self, key: &'static str, reason: impl Into<String>) -> ConfigError {
        ConfigError::Invalid {
            key: key.to_string(),
            origin: self.get(key).map_or(Origin::Flag, |(_, o)| o),
            reason: reason.into(),
        }
    }

    fn positive_int(
        &self,
        key: &'static str,
        default: Option<usize>,
    ) -> Result<usize, ConfigError> {
        let v = match default {
            Some(d) => self.parse_value(key, "a positive integer")?.unwrap_or(d),
            None => self.require(key, "a positive integer")?,
        };
        if v == 0 {
            return Err(self.invalid(key, "must be at least 1"));
        }
        Ok(v)
    }

    fn real(
        &self,
        key: &'static str,
        default: f64,
        check: fn(f64) -> bool,
        what: &str,
    ) -> Result<f64, ConfigError> {
        let v = self.parse_value(key, "a number")?.unwrap_or(default);
        if !check(v) {
            return Err(self.invalid(key, format!("must be {what}, got {v}")));
        }
        Ok(v)
    }

    fn optional_real(
        &self,
        key: &'static str,
        check: fn(f64) -> bool,
        what: &str,
    ) -> Result<Option<f64>, ConfigError> {
        match self.parse_value::<f64>(key, "a number")? {
            Some(v) if !check(v) => Err(self.invalid(key, format!("must be {what}, got {v}"))),
            other => Ok(other),
        }
    }

    /// Validates every key and fills in defaults.
    pub fn resolve(&self) -> Result<Config, ConfigError> {
        let objective_name: String = self.require("objective", "quadratic | logistic")?;
        let objective_label = match objective_name.as_str() {
            "quadratic" => "quadratic",
            "logistic" => "logistic",
            _ => {
                return Err(self.invalid(
                    "objective",
                    format!("expected quadratic | logistic, got `{objective_name}`"),
                ))
            }
        };
        let foreign = if objective_label == "quadratic" {
            LOGISTIC_ONLY
        } else {
            QUADRATIC_ONLY
        };
        for key in foreign {
            if let Some((_, origin)) = self.get(key) {
                return Err(ConfigError::NotApplicable {
                    key: key.to_string(),
                    origin,
                    objective: objective_label,
                });
            }
        }

        let nonneg = |v: f64| v.is_finite() && v >= 0.0;
        let positive = |v: f64| v.is_finite() && v > 0.0;

        let objective = if objective_label == "quadratic" {
            ObjectiveConfig::Quadratic {
                dim: self.positive_int("d", Some(3))?,
                c1: self.real("c1", 9.0, nonneg, "nonnegative")?,
                c2: self.real("c2", 0.25, nonneg, "nonnegative")?,
            }
        } else {
            let data: String = self.require("data", "a file path")?;
            ObjectiveConfig::Logistic {
                data: PathBuf::from(data),
                features: self.parse_value("features", "a positive integer")?,
                lambda: self.real("lambda", 0.05, positive, "positive")?,
                batch: self.positive_int("batch", Some(1))?,
                fstar: self.optional_real("fstar", f64::is_finite, "finite")?,
                fstar_tol: self.real("fstar_tol", 1e-8, positive, "positive")?,
            }
        };

        let beta = match self.get("beta") {
            None => Beta::Value(1.0),
            Some(("auto", _)) => Beta::Auto,
            Some(_) => {
                let v: f64 = self.require("beta", "a number or `auto`")?;
                if !positive(v) {
                    return Err(self.invalid("beta", format!("must be positive, got {v}")));
                }
                Beta::Value(v)
            }
        };

        let schedules = match self.get("schedules") {
            None => vec![ScheduleSpec::Sync, ScheduleSpec::OneShot],
            Some((list, _)) => {
                let specs = list
                    .split(';')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| {
                        s.parse::<ScheduleSpec>()
                            .map_err(|e| self.invalid("schedules", e.to_string()))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if specs.is_empty() {
                    return Err(self.invalid("schedules", "no schedule given"));
                }
                specs
            }
        };

        let x0 = match self.get("x0") {
            None if objective_label == "quadratic" => InitialPoint::Fill(1.0),
            None => InitialPoint::Fill(0.0),
            Some(("ones", _)) => InitialPoint::Fill(1.0),
            Some(("zeros", _)) => InitialPoint::Fill(0.0),
            Some(_) => {
                let v: f64 = self.require("x0", "ones | zeros | a number")?;
                if !v.is_finite() {
                    return Err(self.invalid("x0", "must be finite"));
                }
                InitialPoint::Fill(v)
            }
        };

        let stride = match self.get("stride") {
            None | Some(("auto", _)) => None,
            Some(_) => Some(self.positive_int("stride", None)?),
        };

        let speedup_workers = match self.get("speedup_workers") {
            None => vec![5, 10, 20, 40],
            Some((list, _)) => list
                .split(',')
                .map(|tok| match tok.trim().parse::<usize>() {
                    Ok(v) if v > 0 => Ok(v),
                    _ => Err(self.invalid(
                        "speedup_workers",
                        format!("`{}` is not a positive integer", tok.trim()),
                    )),
                })
                .collect::<Result<Vec<_>, _>>()?,
        };

        let noise_c = self.optional_real("noise_c", nonneg, "nonnegative")?;
        let noise_sigma2 = self.optional_real("noise_sigma2", nonneg, "nonnegative")?;

        Ok(Config {
            objective,
            horizon: self.positive_int("T", None)?,
            workers: self.positive_int("n", None)?,
            beta,
            schedules,
            trials: self.positive_int("trials", Some(1))?,
            seed: self
                .parse_value("seed", "an unsigned 64-bit integer")?
                .unwrap_or(0),
            x0,
            stride,
            out: self.get("out").map(|(v, _)| PathBuf::from(v)),
            noise_c,
            noise_sigma2,
            xi0: self.optional_real("xi0", nonneg, "nonnegative")?,
            speedup_workers,
        })
    }
}

/// Parses configuration text into a validated [`Config`].
pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    RawConfig::parse(text)?.resolve()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Beta {
    Value(f64),
    Auto,
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Value(v) => write!(f, "{v}"),
            Self::Auto => write!(f, "auto"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialPoint {
    Fill(f64),
}

impl InitialPoint {
    pub fn vector(&self, dim: usize) -> Vec<f64> {
        match self {
            Self::Fill(v) => vec![*v; dim],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ObjectiveConfig {
    Quadratic {
        dim: usize,
        c1: f64,
        c2: f64,
    },
    Logistic {
        data: PathBuf,
        features: Option<usize>,
        lambda: f64,
        batch: usize,
        fstar: Option<f64>,
        fstar_tol: f64,
    },
}

/// Validated, fully defaulted configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub objective: ObjectiveConfig,
    pub horizon: usize,
    pub workers: usize,
    pub beta: Beta,
    pub schedules: Vec<ScheduleSpec>,
    pub trials: usize,
    pub seed: u64,
    pub x0: InitialPoint,
    pub stride: Option<usize>,
    pub out: Option<PathBuf>,
    pub noise_c: Option<f64>,
    pub noise_sigma2: Option<f64>,
    pub xi0: Option<f64>,
    pub speedup_workers: Vec<usize>,
}

impl Config {
    /// Resolved settings as `key = value` lines, in a fixed order. Together
    /// with the data file this reproduces the run.
    pub fn echo(&self) -> Vec<String> {
        let mut lines = Vec::new();
        let mut push = |k: &str, v: String| lines.push(format!("{k} = {v}"));
        match &self.objective {
            ObjectiveConfig::Quadratic { dim, c1, c2 } => {
                push("objective", "quadratic".into());
                push("d", dim.to_string());
                push("c1", c1.to_string());
                push("c2", c2.to_string());
            }
            ObjectiveConfig::Logistic {
                data,
                features,
                lambda,
                batch,
                fstar,
                fstar_tol,
            } => {
                push("objective", "logistic".into());
                push("data", data.display().to_string());
                if let Some(f) = features {
                    push("features", f.to_string());
                }
                push("lambda", lambda.to_string());
                push("batch", batch.to_string());
                if let Some(f) = fstar {
                    push("fstar", f.to_string());
                }
                push("fstar_tol", fstar_tol.to_string());
            }
        }
        push("T", self.horizon.to_string());
        push("n", self.workers.to_string());
        push("beta", self.beta.to_string());
        let specs: Vec<String> = self.schedules.iter().map(|s| s.to_string()).collect();
        push("schedules", specs.join("; "));
        push("trials", self.trials.to_string());
        push("seed", self.seed.to_string());
        let InitialPoint::Fill(v) = self.x0;
        push("x0", v.to_string());
        push(
            "stride",
            self.stride.map_or("auto".into(), |s| s.to_string()),
        );
        if let Some(c) = self.noise_c {
            push("noise_c", c.to_string());
        }
        if let Some(s) = self.noise_sigma2 {
            push("noise_sigma2", s.to_string());
        }
        if let Some(x) = self.xi0 {
            push("xi0", x.to_string());
        }
        lines
    }
}

/// Key table for `--help`.
pub fn keys_help() -> String {
    let mut out = String::from("Configuration keys (`key = value`, one per line):\n");
    for (key, default, doc) in KEYS {
        if default.is_empty() {
            out.push_str(&format!("  {key:<16} {doc}\n"));
        } else {
            out.push_str(&format!("  {key:<16} {doc} [default: {default}]\n"));
        }
    }
    out
}
