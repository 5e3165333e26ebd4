//! Flat `key=value` configuration.
//!
//! One entry per line, `#` starts a comment, blank lines are ignored and
//! whitespace around keys and values is trimmed. Keys may appear once.
//!
//! Run configuration keys and defaults:
//!
//! | key | default |
//! |---|---|
//! | `kappa` | `0.1` |
//! | `delta` | `0` |
//! | `omega12`, `omega23` | `1` |
//! | `omega13` | `0` |
//! | `phi12`, `phi23`, `phi13` | `0` |
//! | `gamma1`, `gamma2`, `gamma3` | `0` |
//! | `horizon` | `100 / kappa` |
//! | `tol` | `1e-10` |
//! | `scan_points` | `4001` |
//! | `max_steps` | `50000000` |
//! | `out` | none |

use std::path::PathBuf;

use crate::error::ConfigError;
use crate::model::SystemParams;
use crate::propagate::SolverOptions;
use crate::spectrum::GapOptions;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_KAPPA_T: f64 = 100.0;

/// Keys mapping onto [`SystemParams`] fields, in canonical order.
pub const PARAM_KEYS: [&str; 12] = [
    "kappa", "delta", "omega12", "omega23", "omega13", "phi12", "phi23", "phi13", "gamma1", "gamma2", "gamma3",
    "horizon",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

pub fn parse_entries(text: &str) -> Result<Vec<Entry>, ConfigError> {
    let mut entries: Vec<Entry> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Syntax { line: idx + 1, text: raw.to_string() });
        };
        let key = key.trim();
        if key.is_empty() {
            return Err(ConfigError::Syntax { line: idx + 1, text: raw.to_string() });
        }
        if entries.iter().any(|e| e.key == key) {
            return Err(ConfigError::DuplicateKey(key.to_string()));
        }
        entries.push(Entry { line: idx + 1, key: key.to_string(), value: value.trim().to_string() });
    }
    Ok(entries)
}

pub fn parse_f64(key: &str, value: &str) -> Result<f64, ConfigError> {
    value.parse::<f64>().map_err(|e| ConfigError::Value {
        key: key.to_string(),
        value: value.to_string(),
        reason: e.to_string(),
    })
}

pub fn parse_usize(key: &str, value: &str) -> Result<usize, ConfigError> {
    value.parse::<usize>().map_err(|e| ConfigError::Value {
        key: key.to_string(),
        value: value.to_string(),
        reason: e.to_string(),
    })
}

/// A tolerance in `[1e−12, 1e−4]`.
pub fn parse_tol(key: &str, value: &str) -> Result<f64, ConfigError> {
    let tol = parse_f64(key, value)?;
    check_tol(tol).map_err(|reason| ConfigError::Value { key: key.into(), value: value.into(), reason })
}

pub fn check_tol(tol: f64) -> Result<f64, String> {
    if (1e-12..=1e-4).contains(&tol) {
        Ok(tol)
    } else {
        Err(format!("tolerance {tol:e} outside [1e-12, 1e-4]"))
    }
}

pub fn param_value(p: &SystemParams, key: &str) -> Option<f64> {
    Some(match key {
        "kappa" => p.kappa,
        "delta" => p.delta,
        "omega12" => p.omega12,
        "omega23" => p.omega23,
        "omega13" => p.omega13,
        "phi12" => p.phi12,
        "phi23" => p.phi23,
        "phi13" => p.phi13,
        "gamma1" => p.gamma1,
        "gamma2" => p.gamma2,
        "gamma3" => p.gamma3,
        "horizon" => p.horizon,
        _ => return None,
    })
}

/// Sets the field named `key`; returns `false` for an unknown key.
pub fn set_param(p: &mut SystemParams, key: &str, value: f64) -> bool {
    let slot = match key {
        "kappa" => &mut p.kappa,
        "delta" => &mut p.delta,
        "omega12" => &mut p.omega12,
        "omega23" => &mut p.omega23,
        "omega13" => &mut p.omega13,
        "phi12" => &mut p.phi12,
        "phi23" => &mut p.phi23,
        "phi13" => &mut p.phi13,
        "gamma1" => &mut p.gamma1,
        "gamma2" => &mut p.gamma2,
        "gamma3" => &mut p.gamma3,
        "horizon" => &mut p.horizon,
        _ => return false,
    };
    *slot = value;
    true
}

/// Builds parameters from the entries whose key is in [`PARAM_KEYS`],
/// filling the rest from the documented defaults. Other entries are left
/// to the caller.
pub fn params_from_entries(entries: &[Entry]) -> Result<SystemParams, ConfigError> {
    let mut p = SystemParams::default();
    let mut horizon_given = false;
    for e in entries.iter().filter(|e| PARAM_KEYS.contains(&e.key.as_str())) {
        set_param(&mut p, &e.key, parse_f64(&e.key, &e.value)?);
        horizon_given |= e.key == "horizon";
    }
    if !horizon_given {
        p.horizon = DEFAULT_KAPPA_T / p.kappa;
    }
    Ok(p.validated()?)
}

/// Settings for the single-point commands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: SystemParams,
    pub tol: f64,
    pub scan_points: usize,
    pub max_steps: usize,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let params = SystemParams::default();
        Self {
            params,
            tol: DEFAULT_TOL,
            scan_points: GapOptions::default().scan_points,
            max_steps: SolverOptions::default().max_steps,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let entries = parse_entries(text)?;
        let mut cfg = Self { params: params_from_entries(&entries)?, ..Self::default() };
        for e in &entries {
            match e.key.as_str() {
                k if PARAM_KEYS.contains(&k) => {}
                "tol" => cfg.tol = parse_tol(&e.key, &e.value)?,
                "max_steps" => cfg.max_steps = parse_usize(&e.key, &e.value)?,
                "scan_points" => {
                    cfg.scan_points = parse_usize(&e.key, &e.value)?;
                    if cfg.scan_points < 3 {
                        return Err(ConfigError::Value {
                            key: e.key.clone(),
                            value: e.value.clone(),
                            reason: "at least 3 scan points are needed".into(),
                        });
                    }
                }
                "out" => cfg.out = Some(PathBuf::from(&e.value)),
                other => return Err(ConfigError::UnknownKey(other.to_string())),
            }
        }
        Ok(cfg)
    }

    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions { tol: self.tol, max_steps: self.max_steps, ..SolverOptions::default() }
    }

    pub fn gap_options(&self) -> GapOptions {
        GapOptions { scan_points: self.scan_points, ..GapOptions::default() }
    }
}
