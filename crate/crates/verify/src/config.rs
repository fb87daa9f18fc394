//! Run configuration.
//!
//! A TOML file with two documented global keys and one optional table per
//! suite, whose keys must be parameters of that suite:
//!
//! ```toml
//! tolerance = 1e-6   # numeric suites only
//! jobs = 4
//!
//! [b2-theta-long]
//! order = 10
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use qhr_core::report::Mode;
use serde::Serialize;

use crate::{ParamValue, Params, Registry, SuiteError, SuiteSpec};

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Config {
    pub tolerance: Option<f64>,
    #[serde(skip)]
    pub jobs: Option<usize>,
    pub suites: BTreeMap<String, Params>,
}

impl Config {
    pub fn load(path: &Path, registry: &Registry) -> Result<Self, SuiteError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SuiteError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, registry)
    }

    pub fn parse(text: &str, registry: &Registry) -> Result<Self, SuiteError> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| SuiteError::Config(e.to_string()))?;
        let mut cfg = Config::default();
        for (key, value) in table {
            match (key.as_str(), value) {
                ("tolerance", v) => {
                    let t = v
                        .as_float()
                        .or_else(|| v.as_integer().map(|i| i as f64))
                        .filter(|t| *t > 0.0)
                        .ok_or_else(|| SuiteError::Config("`tolerance` must be a positive number".into()))?;
                    cfg.tolerance = Some(t);
                }
                ("jobs", v) => {
                    let j = v
                        .as_integer()
                        .filter(|j| *j > 0)
                        .ok_or_else(|| SuiteError::Config("`jobs` must be a positive integer".into()))?;
                    cfg.jobs = Some(j as usize);
                }
                (name, toml::Value::Table(t)) => {
                    let suite = registry
                        .get(name)
                        .ok_or_else(|| SuiteError::Config(format!("unknown suite section [{name}]")))?;
                    let mut params = Params::default();
                    for (k, v) in t {
                        params.0.insert(k, scalar(&v).ok_or_else(|| {
                            SuiteError::Config(format!("[{name}]: value of a parameter must be a scalar"))
                        })?);
                    }
                    suite.spec.resolve(&params)?;
                    cfg.suites.insert(name.to_string(), params);
                }
                (other, _) => return Err(SuiteError::Config(format!("unknown key `{other}`"))),
            }
        }
        Ok(cfg)
    }

    /// Overrides for one suite: its own section plus the global tolerance,
    /// which only reaches numeric suites that have a tolerance parameter.
    pub fn overrides_for(&self, spec: &SuiteSpec) -> Params {
        let mut p = self.suites.get(&spec.name).cloned().unwrap_or_default();
        if let Some(t) = self.tolerance {
            if spec.mode == Mode::Numeric && spec.parameters.0.contains_key("tolerance") {
                p.0.entry("tolerance".into()).or_insert(ParamValue::Float(t));
            }
        }
        p
    }
}

fn scalar(v: &toml::Value) -> Option<ParamValue> {
    match v {
        toml::Value::Integer(i) => Some(ParamValue::Int(*i)),
        toml::Value::Float(f) => Some(ParamValue::Float(*f)),
        toml::Value::String(s) => Some(ParamValue::Text(s.clone())),
        _ => None,
    }
}
