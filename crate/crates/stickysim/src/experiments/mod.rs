//! Orchestrated reproductions with persisted, deterministic reports.
//!
//! Every experiment returns a [`Report`]: one [`Case`] per independent unit
//! of work, each with a pass flag, structured details and, on failure, a
//! witness holding the replayable scenario. Cases run in parallel and are
//! assembled in case order, so the serialized report depends only on the
//! parameters, the backend and the seeds.

mod cascade;
mod jeps;
mod properties;
mod tail;

use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use stickysim_core::engine::EventLog;

use crate::error::Result;
use crate::schema::{write_json, EventLogFile, FileScalar, ScenarioFile};

pub use cascade::run_example3_nonuniqueness;
pub use jeps::run_jeps_sweep;
pub use properties::run_property_suite;
pub use tail::run_example4_nonexistence;

/// Environment variable naming the default results directory.
pub const RESULTS_DIR_ENV: &str = "STICKYSIM_RESULTS_DIR";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub id: String,
    pub pass: bool,
    pub details: Value,
    /// Replayable scenario and times; present on every failure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Case {
    pub fn new(id: impl Into<String>, pass: bool, details: Value) -> Self {
        Case {
            id: id.into(),
            pass,
            details,
            witness: None,
        }
    }

    /// Attaches `witness` when the case failed.
    pub fn with_witness(mut self, witness: impl FnOnce() -> Value) -> Self {
        if !self.pass {
            self.witness = Some(witness());
        }
        self
    }

    /// Case for an error raised while running a unit of work.
    pub fn errored(id: impl Into<String>, err: &crate::error::Error, witness: Value) -> Self {
        Case {
            id: id.into(),
            pass: false,
            details: json!({ "error": err.to_string() }),
            witness: Some(witness),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub experiment: String,
    pub parameters: Value,
    pub backend: String,
    pub seeds: Vec<u64>,
    pub cases: Vec<Case>,
    pub notes: Vec<String>,
    pub pass: bool,
    /// Measured by the caller; kept out of the JSON so reports stay
    /// byte-identical across runs.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl Report {
    pub fn new(experiment: &str, parameters: Value, backend: &str, seeds: Vec<u64>, cases: Vec<Case>) -> Self {
        let pass = cases.iter().all(|c| c.pass);
        Report {
            experiment: experiment.to_string(),
            parameters,
            backend: backend.to_string(),
            seeds,
            cases,
            notes: Vec::new(),
            pass,
            wall_time: Duration::ZERO,
        }
    }

    pub fn with_notes(mut self, notes: &[&str]) -> Self {
        self.notes.extend(notes.iter().map(|n| n.to_string()));
        self
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.pass)
    }

    /// Hex SHA-256 of the experiment name, parameters, backend and seeds.
    pub fn parameter_hash(&self) -> String {
        let key = json!({
            "experiment": self.experiment,
            "parameters": self.parameters,
            "backend": self.backend,
            "seeds": self.seeds,
        });
        let digest = Sha256::digest(key.to_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn file_name(&self) -> String {
        format!("{}-{}.json", self.experiment, &self.parameter_hash()[..16])
    }

    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }

    /// Writes the report into `dir`; returns the file path.
    pub fn persist(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(self.file_name());
        write_json(&path, self)?;
        Ok(path)
    }
}

/// `explicit`, else `$STICKYSIM_RESULTS_DIR`, else `./results`.
pub fn results_dir(explicit: Option<&Path>) -> PathBuf {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(RESULTS_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("results"))
}

pub(crate) fn scenario_witness<S: FileScalar>(
    scenario: &stickysim_core::Scenario<S>,
    log: Option<&EventLog<S>>,
    extra: Value,
) -> Value {
    let mut w = json!({
        "scenario": ScenarioFile::from_scenario(scenario, None),
        "detail": extra,
    });
    if let Some(log) = log {
        w["event_times"] = Value::Array(log.times().iter().map(S::to_json).collect());
        w["event_log"] = serde_json::to_value(EventLogFile::from_log(log)).unwrap_or(Value::Null);
    }
    w
}

pub(crate) fn values<S: FileScalar>(xs: &[S]) -> Value {
    Value::Array(xs.iter().map(S::to_json).collect())
}
