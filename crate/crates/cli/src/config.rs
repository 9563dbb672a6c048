//! Run configuration: built from flags, then overridden by an optional
//! JSON file whose keys are the field names of [`RunConfig`].

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use moyal_phi4::model::{Mu2Policy, LAMBDA_CRITICAL};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    EvalJ,
    EvalG,
    Tau,
    SolveFredholm,
    Spectrum,
    Dimension,
    Series,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Which Fredholm equation to solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    J,
    Phi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Log,
    Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub lambda: f64,
    /// `ribbon`, `unit`, `explicit:<value>` or a bare number.
    pub mu2_policy: String,
    pub grid_n: usize,
    pub grid: GridKind,
    pub form: Form,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub t_max: f64,
    pub eps_seq: Vec<f64>,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub ps: Vec<f64>,
    pub a: f64,
    pub mu: f64,
    pub all_eigenvalues: bool,
    pub max_order: usize,
    pub output: Option<PathBuf>,
    pub format: Format,
}

/// A configuration problem; maps to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl RunConfig {
    pub fn mu2(&self) -> Result<Mu2Policy, ConfigError> {
        self.mu2_policy
            .parse()
            .map_err(|e| ConfigError(format!("{e}")))
    }

    /// Overrides fields with the keys of a JSON object read from `path`.
    pub fn apply_file(self, path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        let patch: Value = serde_json::from_str(&text)
            .map_err(|e| ConfigError(format!("invalid JSON in {}: {e}", path.display())))?;
        self.apply_json(patch)
    }

    pub fn apply_json(self, patch: Value) -> Result<Self, ConfigError> {
        let Value::Object(patch) = patch else {
            return Err(ConfigError("config file must hold a JSON object".into()));
        };
        let mut base = serde_json::to_value(&self).map_err(|e| ConfigError(e.to_string()))?;
        if let Value::Object(map) = &mut base {
            for (k, v) in patch {
                map.insert(k, v);
            }
        }
        serde_json::from_value(base).map_err(|e| ConfigError(format!("config: {e}")))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !self.lambda.is_finite() || self.lambda <= LAMBDA_CRITICAL {
            return Err(ConfigError(format!(
                "lambda must be finite and above -1/pi, got {}",
                self.lambda
            )));
        }
        self.mu2()?;
        if self.grid_n < 16 {
            return Err(ConfigError(format!("grid_n must be at least 16, got {}", self.grid_n)));
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.t_max > 0.0) {
            return Err(ConfigError("tolerances and t_max must be positive".into()));
        }
        if self.eps_seq.is_empty() || self.eps_seq.iter().any(|&e| !(e > 0.0)) {
            return Err(ConfigError("eps_seq must be non-empty and positive".into()));
        }
        let needs = |name: &str, v: &[f64]| {
            if v.is_empty() {
                Err(ConfigError(format!("{name} must not be empty")))
            } else if v.iter().any(|x| !x.is_finite()) {
                Err(ConfigError(format!("{name} must be finite")))
            } else {
                Ok(())
            }
        };
        match self.command {
            Command::EvalJ => needs("x values", &self.xs)?,
            Command::EvalG => {
                needs("x values", &self.xs)?;
                needs("y values", &self.ys)?;
            }
            Command::Tau => needs("p values", &self.ps)?,
            _ => {}
        }
        if !(self.mu >= 0.0) {
            return Err(ConfigError(format!("mu must be non-negative, got {}", self.mu)));
        }
        Ok(())
    }
}

/// Parses `MIN,MAX,COUNT` into COUNT points, linear or logarithmic.
pub fn expand_range(text: &str, log: bool) -> Result<Vec<f64>, ConfigError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || ConfigError(format!("range '{text}' must be MIN,MAX,COUNT"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].parse().map_err(|_| bad())?;
    let n: usize = parts[2].parse().map_err(|_| bad())?;
    if n == 0 || !(hi >= lo) {
        return Err(ConfigError(format!("range '{text}' is empty")));
    }
    if log && !(lo > 0.0) {
        return Err(ConfigError(format!("log range '{text}' needs MIN > 0")));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..n)
        .map(|i| {
            let s = i as f64 / (n - 1) as f64;
            if log {
                lo * (hi / lo).powf(s)
            } else {
                lo + (hi - lo) * s
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(expand_range("0,1,3", false).unwrap(), vec![0.0, 0.5, 1.0]);
        let v = expand_range("1,100,3", true).unwrap();
        assert!((v[1] - 10.0).abs() < 1e-12);
        assert!(expand_range("1,0,3", false).is_err());
        assert!(expand_range("0,1", false).is_err());
    }
}
