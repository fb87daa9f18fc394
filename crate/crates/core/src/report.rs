use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Error,
}

impl Status {
    /// Counts as success for exit-code purposes.
    pub fn is_ok(self) -> bool {
        matches!(self, Status::Pass | Status::Skipped)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
            Status::Error => "ERROR",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Numeric,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Numeric => "numeric",
        })
    }
}

/// Outcome of one named check.
///
/// `residual` is the largest absolute residual seen; in exact mode a PASS
/// always carries `0.0`. `details` holds one human-readable line per case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub status: Status,
    pub mode: Mode,
    pub order: Option<String>,
    pub tolerance: Option<f64>,
    pub residual: f64,
    pub details: Vec<String>,
    pub elapsed: f64,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, mode: Mode) -> Self {
        Self {
            suite: suite.into(),
            status: Status::Pass,
            mode,
            order: None,
            tolerance: None,
            residual: 0.0,
            details: Vec::new(),
            elapsed: 0.0,
        }
    }

    pub fn with_order(mut self, order: impl fmt::Display) -> Self {
        self.order = Some(order.to_string());
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = Some(tol);
        self
    }

    pub fn skipped(suite: impl Into<String>, mode: Mode, why: impl Into<String>) -> Self {
        let mut r = Self::new(suite, mode);
        r.status = Status::Skipped;
        r.details.push(why.into());
        r
    }

    pub fn error(suite: impl Into<String>, mode: Mode, why: impl fmt::Display) -> Self {
        let mut r = Self::new(suite, mode);
        r.status = Status::Error;
        r.details.push(format!("error: {why}"));
        r
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.details.push(line.into());
    }

    /// Records a sub-check. A failing sub-check turns a PASS into a FAIL;
    /// ERROR is sticky.
    pub fn record(&mut self, ok: bool, residual: f64, line: impl Into<String>) {
        let line = line.into();
        self.details
            .push(format!("{} {}", if ok { "ok  " } else { "FAIL" }, line));
        if residual.is_finite() {
            self.residual = self.residual.max(residual);
        } else {
            self.residual = f64::INFINITY;
        }
        if !ok && self.status == Status::Pass {
            self.status = Status::Fail;
        }
    }

    /// Folds a child report into this one (status, residual, prefixed details).
    pub fn absorb(&mut self, child: &VerificationReport) {
        for d in &child.details {
            self.details.push(format!("[{}] {}", child.suite, d));
        }
        self.residual = self.residual.max(child.residual);
        self.status = match (self.status, child.status) {
            (Status::Error, _) | (_, Status::Error) => Status::Error,
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::Pass, _) | (_, Status::Pass) => Status::Pass,
            _ => Status::Skipped,
        };
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Runs `f`, stamping the wall time into the returned report.
    pub fn timed(f: impl FnOnce() -> VerificationReport) -> VerificationReport {
        let start = Instant::now();
        let mut r = f();
        r.elapsed = start.elapsed().as_secs_f64();
        r
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<28} {:<7} {:<7} residual={:.3e} ({:.2}s)",
            self.suite, self.status, self.mode, self.residual, self.elapsed
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failing_record_flips_status() {
        let mut r = VerificationReport::new("t", Mode::Exact);
        r.record(true, 0.0, "a");
        assert!(r.passed());
        r.record(false, 1.0, "b");
        assert_eq!(r.status, Status::Fail);
        r.record(true, 0.0, "c");
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.residual, 1.0);
    }

    #[test]
    fn absorb_merges_worst_status() {
        let mut parent = VerificationReport::skipped("p", Mode::Exact, "none yet");
        let child = VerificationReport::new("c", Mode::Exact);
        parent.absorb(&child);
        assert_eq!(parent.status, Status::Pass);
        let err = VerificationReport::error("e", Mode::Exact, "boom");
        parent.absorb(&err);
        assert_eq!(parent.status, Status::Error);
    }

    #[test]
    fn status_serializes_uppercase() {
        let s = serde_json::to_string(&Status::Skipped).unwrap();
        assert_eq!(s, "\"SKIPPED\"");
    }
}
