//! Versioned JSON reports and the plain-text summary table.

use std::path::Path;

use qhr_core::report::{Status, VerificationReport};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{Params, SuiteError};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub version: String,
    /// SHA-256 of the suite name and its effective parameters.
    pub config_hash: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    #[serde(flatten)]
    pub report: VerificationReport,
    pub parameters: Params,
    pub environment: Environment,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub error: usize,
}

impl Summary {
    pub fn of<'a>(reports: impl IntoIterator<Item = &'a VerificationReport>) -> Self {
        let mut s = Summary::default();
        for r in reports {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Skipped => s.skipped += 1,
                Status::Error => s.error += 1,
            }
        }
        s
    }

    /// `0` all PASS/SKIPPED, `1` any FAIL, `2` any ERROR.
    pub fn exit_code(&self) -> i32 {
        if self.error > 0 {
            2
        } else if self.fail > 0 {
            1
        } else {
            0
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub schema_version: u32,
    pub reports: Vec<ReportRecord>,
    pub summary: Summary,
}

pub fn config_hash(suite: &str, params: &Params) -> String {
    let canonical = serde_json::to_string(&(suite, params)).expect("params serialize");
    let digest = Sha256::digest(canonical.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

impl Envelope {
    pub fn new(runs: Vec<(VerificationReport, Params)>) -> Self {
        let reports: Vec<ReportRecord> = runs
            .into_iter()
            .map(|(report, parameters)| ReportRecord {
                environment: Environment {
                    version: env!("CARGO_PKG_VERSION").to_string(),
                    config_hash: config_hash(&report.suite, &parameters),
                },
                report,
                parameters,
            })
            .collect();
        let summary = Summary::of(reports.iter().map(|r| &r.report));
        Self { schema_version: SCHEMA_VERSION, reports, summary }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn write(&self, path: &Path) -> Result<(), SuiteError> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    /// One row per report plus a totals line.
    pub fn table(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            out.push_str(&r.report.to_string());
            out.push('\n');
            if r.report.status == Status::Error {
                for d in &r.report.details {
                    out.push_str(&format!("    {d}\n"));
                }
            }
        }
        let s = self.summary;
        out.push_str(&format!(
            "{} suites: {} passed, {} failed, {} skipped, {} errors\n",
            self.reports.len(),
            s.pass,
            s.fail,
            s.skipped,
            s.error
        ));
        out
    }
}
