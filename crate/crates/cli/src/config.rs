//! JSON config files mirroring the flag names, merged under explicit flags.

use crate::CliError;
use std::path::Path;

/// A parsed config file. Keys mirror the long flag names of the command the
/// config is passed to; unknown keys are errors, and a flag given on the
/// command line always wins over the file value.
pub struct ConfigMap {
    map: serde_json::Map<String, serde_json::Value>,
}

impl ConfigMap {
    pub fn empty() -> Self {
        Self {
            map: serde_json::Map::new(),
        }
    }

    pub fn load(path: Option<&Path>, allowed: &[&str]) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::empty());
        };
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::usage(format!("cannot read config {}: {e}", path.display()))
        })?;
        let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| {
            CliError::usage(format!("malformed config {}: {e}", path.display()))
        })?;
        let serde_json::Value::Object(map) = value else {
            return Err(CliError::usage(format!(
                "config {} must be a JSON object",
                path.display()
            )));
        };
        for key in map.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(CliError::usage(format!(
                    "unknown config key '{key}' for this command (allowed: {})",
                    allowed.join(", ")
                )));
            }
        }
        Ok(Self { map })
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_f64()
                .map(Some)
                .ok_or_else(|| CliError::usage(format!("config key '{key}' must be a number"))),
        }
    }

    pub fn usize(&self, key: &str) -> Result<Option<usize>, CliError> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_u64()
                .map(|n| Some(n as usize))
                .ok_or_else(||

                    CliError::usage(format!("config key '{key}' must be a non-negative integer"))
                ),
        }
    }

    pub fn string(&self, key: &str) -> Result<Option<String>, CliError> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_str()
                .map(|s| Some(s.to_owned()))
                .ok_or_else(|| CliError::usage(format!("config key '{key}' must be a string"))),
        }
    }
}

/// Effective tolerance: --tol flag, then config, then the
/// DUALITY_DEFAULT_TOL environment variable, then the library default.
pub fn resolve_tol(flag: Option<f64>, cfg: &ConfigMap) -> Result<f64, CliError> {
    if let Some(t) = flag.or(cfg.f64("tol")?) {
        return check_tol(t);
    }
    match std::env::var("DUALITY_DEFAULT_TOL") {
        Ok(text) => {
            let t: f64 = text.parse().map_err(|_| {
                CliError::usage(format!(
                    "DUALITY_DEFAULT_TOL is not a valid number: '{text}'"
                ))
            })?;
            check_tol(t)
        }
        Err(_) => Ok(duality_core::DEFAULT_VALIDATE_TOL),
    }
}

fn check_tol(t: f64) -> Result<f64, CliError> {
    if t.is_finite() && t > 0.0 {
        Ok(t)
    } else {
        Err(CliError::usage(format!("tolerance must be positive, got {t}")))
    }
}
