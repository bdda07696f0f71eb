//! Run configuration: defaults, then a `key = value` file, then
//! `PFAFFLOW_THREADS`, then command-line flags.

use std::fs;
use std::path::Path;

use crate::UsageError;

pub const THREADS_ENV: &str = "PFAFFLOW_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Table,
}

impl std::str::FromStr for Format {
    type Err = UsageError;

    fn from_str(s: &str) -> Result<Self, UsageError> {
        match s {
            "json" => Ok(Format::Json),
            "table" => Ok(Format::Table),
            other => Err(UsageError(format!(
                "unknown format {other:?} (json or table)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// Largest odd time index used when building time-dependent weights.
    pub n_max: u32,
    /// Weighted-degree cap on positive times.
    pub degree: u32,
    /// Weighted-degree cap on negative times.
    pub neg_degree: u32,
    /// Absolute tolerance for floating-point routes.
    pub tol: f64,
    pub format: Format,
    /// Worker threads; `0` lets the pool decide.
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_max: 9,
            degree: 10,
            neg_degree: 4,
            tol: 1e-10,
            format: Format::Json,
            threads: 0,
        }
    }
}

impl RunConfig {
    /// Applies `key = value` lines. `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<(), UsageError> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                UsageError(format!("config line {}: expected key = value", no + 1))
            })?;
            self.set(k.trim(), v.trim().trim_matches('"'))
                .map_err(|e| UsageError(format!("config line {}: {}", no + 1, e.0)))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), UsageError> {
        let text = fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
        self.apply_text(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), UsageError> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, UsageError> {
            v.parse()
                .map_err(|_| UsageError(format!("bad value {v:?} for {key}")))
        }
        match key {
            "n_max" => self.n_max = num(key, value)?,
            "degree" => self.degree = num(key, value)?,
            "neg_degree" => self.neg_degree = num(key, value)?,
            "tol" => self.tol = num(key, value)?,
            "format" => self.format = value.parse()?,
            "threads" => self.threads = num(key, value)?,
            other => return Err(UsageError(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    pub fn apply_env(&mut self) -> Result<(), UsageError> {
        if let Ok(v) = std::env::var(THREADS_ENV) {
            self.threads = v
                .trim()
                .parse()
                .map_err(|_| UsageError(format!("{THREADS_ENV} must be a count, got {v:?}")))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), UsageError> {
        if self.n_max == 0 || self.degree == 0 || self.neg_degree == 0 {
            return Err(UsageError("truncation caps must be positive".into()));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(UsageError(format!(
                "tolerance {} must lie in (0, 1)",
                self.tol
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_values_override_defaults() {
        let mut c = RunConfig::default();
        c.apply_text("# caps\ndegree = 8\nformat = \"table\"\ntol=1e-6\n")
            .unwrap();
        assert_eq!(c.degree, 8);
        assert_eq!(c.format, Format::Table);
        assert_eq!(c.tol, 1e-6);
        assert_eq!(c.neg_degree, 4);
    }

    #[test]
    fn rejects_bad_lines() {
        let mut c = RunConfig::default();
        assert!(c.apply_text("degree").is_err());
        assert!(c.apply_text("colour = red").is_err());
        assert!(c.apply_text("degree = -1").is_err());
    }

    #[test]
    fn validation() {
        let mut c = RunConfig {
            tol: 2.0,
            ..RunConfig::default()
        };
        assert!(c.validate().is_err());
        c.tol = 1e-3;
        c.degree = 0;
        assert!(c.validate().is_err());
    }
}
