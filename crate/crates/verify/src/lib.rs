//! Suite registry, configuration and report persistence for `qhr-verify`.

pub mod b2;
pub mod config;
pub mod output;
pub mod suites;

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use qhr_core::report::{Mode, VerificationReport};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use config::Config;
pub use output::{Envelope, ReportRecord, Summary};

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("invalid override `{key}` for suite `{suite}`: {why}")]
    InvalidOverride { suite: String, key: String, why: String },
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Root(#[from] qhr_core::rootsys::RootSysError),
    #[error(transparent)]
    Series(#[from] qhr_core::series::SeriesError),
    #[error(transparent)]
    Numerator(#[from] qhr_core::numerator::NumeratorError),
    #[error(transparent)]
    Cft(#[from] qhr_core::cft::CftError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A scalar suite parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Float(f64),
    Text(String),
}

impl ParamValue {
    fn kind(&self) -> &'static str {
        match self {
            ParamValue::Int(_) => "integer",
            ParamValue::Float(_) => "float",
            ParamValue::Text(_) => "string",
        }
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Float(v) => write!(f, "{v:e}"),
            ParamValue::Text(v) => write!(f, "{v}"),
        }
    }
}

/// Ordered parameter map of one suite.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Params(pub BTreeMap<String, ParamValue>);

impl Params {
    pub fn int(&self, key: &str) -> i64 {
        match self.0.get(key) {
            Some(ParamValue::Int(v)) => *v,
            other => panic!("parameter `{key}` is not an integer: {other:?}"),
        }
    }

    pub fn float(&self, key: &str) -> f64 {
        match self.0.get(key) {
            Some(ParamValue::Float(v)) => *v,
            Some(ParamValue::Int(v)) => *v as f64,
            other => panic!("parameter `{key}` is not a float: {other:?}"),
        }
    }

    pub fn text(&self, key: &str) -> &str {
        match self.0.get(key) {
            Some(ParamValue::Text(v)) => v,
            other => panic!("parameter `{key}` is not a string: {other:?}"),
        }
    }

    /// `"re,im;re,im"` → complex points.
    pub fn complex_list(&self, key: &str) -> Vec<Complex64> {
        parse_complex_list(self.text(key)).expect("validated at override time")
    }

    pub fn float_list(&self, key: &str) -> Vec<f64> {
        parse_float_list(self.text(key)).expect("validated at override time")
    }
}

pub fn parse_complex_list(s: &str) -> Result<Vec<Complex64>, String> {
    s.split(';')
        .map(|p| {
            let (re, im) = p.trim().split_once(',').ok_or_else(|| format!("`{p}` is not RE,IM"))?;
            let re: f64 = re.trim().parse().map_err(|e| format!("`{re}`: {e}"))?;
            let im: f64 = im.trim().parse().map_err(|e| format!("`{im}`: {e}"))?;
            Ok(Complex64::new(re, im))
        })
        .collect()
}

pub fn parse_float_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect()
}

/// A registered suite: name, owning module, mode and default parameters.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteSpec {
    pub name: String,
    pub module: String,
    pub mode: Mode,
    pub description: String,
    pub parameters: Params,
}

impl SuiteSpec {
    /// Applies overrides after checking that each key exists with a
    /// compatible type and a valid value.
    pub fn resolve(&self, overrides: &Params) -> Result<Params, SuiteError> {
        let mut out = self.parameters.clone();
        for (key, value) in &overrides.0 {
            let bad = |why: String| SuiteError::InvalidOverride { suite: self.name.clone(), key: key.clone(), why };
            let Some(default) = self.parameters.0.get(key) else {
                return Err(bad("no such parameter".into()));
            };
            let value = match (default, value) {
                (ParamValue::Float(_), ParamValue::Int(v)) => ParamValue::Float(*v as f64),
                (d, v) if d.kind() == v.kind() => v.clone(),
                (d, v) => return Err(bad(format!("expected {}, got {}", d.kind(), v.kind()))),
            };
            validate(key, &value).map_err(bad)?;
            out.0.insert(key.clone(), value);
        }
        Ok(out)
    }
}

fn validate(key: &str, value: &ParamValue) -> Result<(), String> {
    match (key, value) {
        ("order" | "eval_order" | "d4_order", ParamValue::Int(v)) if *v < 0 => Err("order must be ≥ 0".into()),
        ("tolerance", ParamValue::Float(v)) if v.is_nan() || *v <= 0.0 => Err("tolerance must be > 0".into()),
        ("tau", ParamValue::Text(s)) => {
            let pts = parse_complex_list(s)?;
            if pts.iter().any(|t| t.im <= 0.0) {
                return Err("Im τ must be > 0".into());
            }
            Ok(())
        }
        ("z", ParamValue::Text(s)) => parse_complex_list(s).map(|_| ()),
        ("t", ParamValue::Text(s)) => {
            let ts = parse_float_list(s)?;
            if ts.iter().any(|t| *t <= 0.0) {
                return Err("t must be > 0".into());
            }
            Ok(())
        }
        ("sets", ParamValue::Text(s)) if s != "printed" && s != "corrected" => {
            Err("sets is `printed` or `corrected`".into())
        }
        ("sign", ParamValue::Text(s)) if s != "plus" && s != "minus" => Err("sign is `plus` or `minus`".into()),
        ("variant", ParamValue::Text(s)) if !["plain", "minus", "star"].contains(&s.as_str()) => {
            Err("variant is `plain`, `minus` or `star`".into())
        }
        _ => Ok(()),
    }
}

pub type Runner = fn(&Params) -> Result<VerificationReport, SuiteError>;

pub struct Suite {
    pub spec: SuiteSpec,
    pub run: Runner,
}

/// Deterministically ordered suite collection.
pub struct Registry {
    suites: Vec<Suite>,
}

impl Default for Registry {
    fn default() -> Self {
        suites::default_registry()
    }
}

impl Registry {
    pub fn empty() -> Self {
        Self { suites: Vec::new() }
    }

    /// Registers a suite; names must be unique.
    pub fn push(&mut self, spec: SuiteSpec, run: Runner) {
        assert!(self.get(&spec.name).is_none(), "duplicate suite `{}`", spec.name);
        self.suites.push(Suite { spec, run });
    }

    pub fn list(&self) -> Vec<&SuiteSpec> {
        self.suites.iter().map(|s| &s.spec).collect()
    }

    pub fn list_module(&self, module: &str) -> Vec<&SuiteSpec> {
        self.list().into_iter().filter(|s| s.module == module).collect()
    }

    pub fn get(&self, name: &str) -> Option<&Suite> {
        self.suites.iter().find(|s| s.spec.name == name)
    }

    /// Runs one suite; engine errors become ERROR reports, unknown names
    /// and bad overrides are returned as errors.
    pub fn run_suite(&self, name: &str, overrides: &Params) -> Result<(VerificationReport, Params), SuiteError> {
        let suite = self.get(name).ok_or_else(|| SuiteError::UnknownSuite(name.into()))?;
        let params = suite.spec.resolve(overrides)?;
        let report = VerificationReport::timed(|| {
            let mut r = match (suite.run)(&params) {
                Ok(r) => r,
                Err(e) => VerificationReport::error(&suite.spec.name, suite.spec.mode, e),
            };
            r.suite = suite.spec.name.clone();
            r
        });
        Ok((report, params))
    }

    /// Runs every suite with `config`, optionally on `jobs` threads; reports
    /// come back in registry order.
    pub fn run_all(&self, config: &Config, jobs: Option<usize>) -> Result<Vec<(VerificationReport, Params)>, SuiteError> {
        let overrides: Vec<Params> = self.suites.iter().map(|s| config.overrides_for(&s.spec)).collect();
        // validate everything up front so configuration errors never half-run
        for (s, o) in self.suites.iter().zip(&overrides) {
            s.spec.resolve(o)?;
        }
        let run = || -> Result<Vec<_>, SuiteError> {
            use rayon::prelude::*;
            self.suites
                .par_iter()
                .zip(overrides.par_iter())
                .map(|(s, o)| self.run_suite(&s.spec.name, o))
                .collect()
        };
        match jobs.or(config.jobs) {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| SuiteError::Config(e.to_string()))?
                .install(run),
            None => run(),
        }
    }
}
