//! Machine-readable verification reports.
//!
//! A report is deterministic for a fixed config and seed: tasks are
//! sorted by name, residual and count tables use ordered keys, and the
//! only timing field (`elapsed_ms`) is excluded by `normalized`, so two
//! runs with the same inputs agree byte-for-byte modulo timing.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::SCHEMA_VERSION;
use crate::error::{Result, TcdsError};

/// Version of this build, stamped into every report.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    /// Fail dominates Inconclusive dominates Pass.
    pub fn worst(self, other: Self) -> Self {
        use Status::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }
}

/// Outcome of one named task: residual tables, exact counts, and
/// human-readable witnesses for anything that went wrong.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskReport {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub residuals: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub counts: BTreeMap<String, i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
}

impl TaskReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: Status::Pass,
            residuals: BTreeMap::new(),
            counts: BTreeMap::new(),
            witnesses: Vec::new(),
        }
    }

    /// Record a residual and fail the task if it exceeds `tol` (NaN fails).
    pub fn residual(&mut self, key: &str, value: f64, tol: f64) {
        self.residuals.insert(key.to_string(), value);
        if !(value <= tol) {
            self.fail(format!("{key} = {value:.3e} exceeds tolerance {tol:.1e}"));
        }
    }

    /// Record a residual that is informational only.
    pub fn observe(&mut self, key: &str, value: f64) {
        self.residuals.insert(key.to_string(), value);
    }

    pub fn count(&mut self, key: &str, value: i64) {
        self.counts.insert(key.to_string(), value);
    }

    /// Record an exact yes/no check.
    pub fn check(&mut self, ok: bool, witness: impl Into<String>) {
        if !ok {
            self.fail(witness);
        }
    }

    pub fn fail(&mut self, witness: impl Into<String>) {
        self.status = Status::Fail;
        self.witnesses.push(witness.into());
    }

    pub fn inconclusive(&mut self, witness: impl Into<String>) {
        self.status = self.status.worst(Status::Inconclusive);
        self.witnesses.push(witness.into());
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub system: String,
    pub seed: u64,
    pub tolerance: f64,
    pub samples: usize,
    pub status: Status,
    pub tasks: Vec<TaskReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl Report {
    pub fn assemble(
        command: impl Into<String>,
        system: impl Into<String>,
        seed: u64,
        tolerance: f64,
        samples: usize,
        mut tasks: Vec<TaskReport>,
    ) -> Self {
        tasks.sort_by(|a, b| a.name.cmp(&b.name));
        let status = tasks.iter().fold(Status::Pass, |acc, t| acc.worst(t.status));
        Self {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION.to_string(),
            command: command.into(),
            system: system.into(),
            seed,
            tolerance,
            samples,
            status,
            tasks,
            elapsed_ms: None,
        }
    }

    /// 0 for pass, 1 for anything else; invalid input never reaches a report.
    pub fn exit_code(&self) -> i32 {
        if self.status == Status::Pass {
            0
        } else {
            1
        }
    }

    /// The report with its timing stripped; equal normalized reports mean
    /// the runs agreed byte-for-byte on everything reproducible.
    pub fn normalized(&self) -> Self {
        let mut out = self.clone();
        out.elapsed_ms = None;
        out
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| TcdsError::BadBuilder(format!("report does not parse: {e}")))
    }

    /// Merge prior outputs into one report. Tasks are keyed by
    /// "system:command:name"; assembly is order-independent, and on a key
    /// collision the entry with the worse status wins.
    pub fn merge(reports: &[Report]) -> Result<Report> {
        if reports.is_empty() {
            return Err(TcdsError::BadBuilder("nothing to merge".into()));
        }
        for r in reports {
            if r.schema_version != SCHEMA_VERSION {
                return Err(TcdsError::BadBuilder(format!(
                    "report from schema {} cannot merge into schema {SCHEMA_VERSION}",
                    r.schema_version
                )));
            }
        }
        let mut merged: BTreeMap<String, TaskReport> = BTreeMap::new();
        for r in reports {
            for t in &r.tasks {
                let key = format!("{}:{}:{}", r.system, r.command, t.name);
                let entry = TaskReport { name: key.clone(), ..t.clone() };
                merged
                    .entry(key)
                    .and_modify(|prev| {
                        if prev.status.worst(entry.status) != prev.status {
                            *prev = entry.clone();
                        }
                    })
                    .or_insert(entry);
            }
        }
        let mut systems: Vec<&str> = reports.iter().map(|r| r.system.as_str()).collect();
        systems.sort_unstable();
        systems.dedup();
        let mut sorted: Vec<&Report> = reports.iter().collect();
        sorted.sort_by(|a, b| (&a.system, &a.command, a.seed).cmp(&(&b.system, &b.command, b.seed)));
        let first = sorted[0];
        Ok(Report::assemble(
            "report",
            systems.join(","),
            first.seed,
            first.tolerance,
            first.samples,
            merged.into_values().collect(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(system: &str, command: &str, task: &str, status: Status) -> Report {
        let mut t = TaskReport::new(task);
        if status == Status::Fail {
            t.fail("boom");
        }
        Report::assemble(command, system, 7, 1e-9, 20, vec![t])
    }

    #[test]
    fn residuals_over_tolerance_fail_the_task() {
        let mut t = TaskReport::new("demo");
        t.residual("ok", 1e-12, 1e-9);
        assert_eq!(t.status, Status::Pass);
        t.residual("bad", 1e-3, 1e-9);
        assert_eq!(t.status, Status::Fail);
        assert!(t.witnesses[0].contains("bad"));
        t.residual("nan", f64::NAN, 1e-9);
        assert_eq!(t.witnesses.len(), 2);
    }

    #[test]
    fn report_roundtrips_and_normalization_strips_timing_only() {
        let mut r = sample("pauli", "verify", "axioms", Status::Pass);
        r.elapsed_ms = Some(42);
        let text = r.to_json();
        let back = Report::from_json(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.normalized().elapsed_ms, None);
        let mut again = r.clone();
        again.elapsed_ms = Some(1000);
        assert_ne!(again.to_json(), r.to_json());
        assert_eq!(again.normalized().to_json(), r.normalized().to_json());
    }

    #[test]
    fn merge_is_order_independent_and_keys_tasks_by_name() {
        let a = sample("pauli", "verify", "axioms", Status::Pass);
        let b = sample("pointswap-c2", "fourier", "fourier", Status::Fail);
        let ab = Report::merge(&[a.clone(), b.clone()]).unwrap();
        let ba = Report::merge(&[b.clone(), a.clone()]).unwrap();
        assert_eq!(ab.to_json(), ba.to_json());
        assert_eq!(ab.status, Status::Fail);
        assert_eq!(ab.exit_code(), 1);
        assert_eq!(ab.tasks.len(), 2);
        assert!(ab.tasks.iter().any(|t| t.name == "pauli:verify:axioms"));
        assert!(Report::merge(&[]).is_err());
    }

    #[test]
    fn status_ordering_is_fail_over_inconclusive_over_pass() {
        assert_eq!(Status::Pass.worst(Status::Inconclusive), Status::Inconclusive);
        assert_eq!(Status::Inconclusive.worst(Status::Fail), Status::Fail);
        assert_eq!(Status::Pass.worst(Status::Pass), Status::Pass);
        let r = sample("x", "verify", "t", Status::Fail);
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.exit_code(), 1);
    }
}
