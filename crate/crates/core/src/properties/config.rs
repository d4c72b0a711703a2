//! Run configuration for the property harness.

use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::tol::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Config {
    pub eps_eq: f64,
    pub eps_circle: f64,
    pub eps_cluster: f64,
    pub rank_tol: f64,
    #[serde(rename = "oracle_N")]
    pub oracle_n: usize,
    pub trials: usize,
    pub parallelism: usize,
}

impl Default for Config {
    fn default() -> Self {
        let t = Tolerances::DEFAULT;
        Self { eps_eq: t.eps_eq, eps_circle: t.eps_circle, eps_cluster: t.eps_cluster, rank_tol: t.rank_tol, oracle_n: 64, trials: 200, parallelism: 0 }
    }
}

fn positive(key: &str, v: &Value) -> Result<f64> {
    match v.as_f64() {
        Some(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(Error::MalformedConfig(format!("{key} must be a positive number"))),
    }
}

fn count(key: &str, v: &Value, allow_zero: bool) -> Result<usize> {
    match v.as_u64() {
        Some(x) if allow_zero || x > 0 => Ok(x as usize),
        _ => Err(Error::MalformedConfig(format!("{key} must be a {} integer", if allow_zero { "nonnegative" } else { "positive" }))),
    }
}

impl Config {
    /// Applies the keys of a JSON object on top of `self`.
    pub fn merge_json(mut self, value: &Value) -> Result<Self> {
        let obj = value.as_object().ok_or_else(|| Error::MalformedConfig("config must be a JSON object".into()))?;
        for (key, v) in obj {
            match key.as_str() {
                "eps_eq" => self.eps_eq = positive(key, v)?,
                "eps_circle" => self.eps_circle = positive(key, v)?,
                "eps_cluster" => self.eps_cluster = positive(key, v)?,
                "rank_tol" => self.rank_tol = positive(key, v)?,
                "oracle_N" => {
                    self.oracle_n = count(key, v, false)?;
                    if self.oracle_n < 8 {
                        return Err(Error::MalformedConfig("oracle_N must be at least 8".into()));
                    }
                }
                "trials" => self.trials = count(key, v, false)?,
                "parallelism" => self.parallelism = count(key, v, true)?,
                other => return Err(Error::MalformedConfig(format!("unknown key {other}"))),
            }
        }
        Ok(self)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::MalformedConfig(e.to_string()))?;
        Self::default().merge_json(&v)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::MalformedConfig(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_and_rejections() {
        let c = Config::from_json_str(r#"{"oracle_N": 128}"#).unwrap();
        assert_eq!(c.oracle_n, 128);
        assert_eq!(c.trials, 200);
        assert!(matches!(Config::from_json_str(r#"{"oracle_N": -1}"#), Err(Error::MalformedConfig(_))));
        let err = Config::from_json_str(r#"{"eps": 1}"#).unwrap_err();
        assert!(err.to_string().contains("eps"));
        assert!(Config::load(Path::new("/nonexistent/config.json")).is_err());
    }
}
