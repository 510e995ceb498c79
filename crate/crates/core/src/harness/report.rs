use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

/// One replica's observation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub replica: u64,
    pub seed: u64,
    /// Lattice position of the tracked particle.
    pub raw: i64,
    /// Rescaled fluctuation.
    pub s: f64,
}

/// How a run ended, in the order of precedence used for exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    StatisticalFail,
    IdentityViolation,
}

/// Summary of an experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub parameters: serde_json::Value,
    pub samples: usize,
    pub aborts: usize,
    pub ks: Option<f64>,
    pub dkw_band: Option<f64>,
    pub tolerance: Option<f64>,
    pub violations: usize,
    pub passed: bool,
    pub runtime_secs: f64,
    /// Experiment-specific numbers (exceedance probabilities, tail slopes, ...).
    pub metrics: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl ExperimentReport {
    pub(crate) fn new(experiment: &str, parameters: serde_json::Value) -> Self {
        ExperimentReport {
            experiment: experiment.to_string(),
            parameters,
            samples: 0,
            aborts: 0,
            ks: None,
            dkw_band: None,
            tolerance: None,
            violations: 0,
            passed: false,
            runtime_secs: 0.0,
            metrics: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn verdict(&self) -> Verdict {
        if self.violations > 0 {
            Verdict::IdentityViolation
        } else if self.passed {
            Verdict::Pass
        } else {
            Verdict::StatisticalFail
        }
    }

    pub fn metric(&self, key: &str) -> Option<f64> {
        self.metrics.get(key).copied()
    }

    /// Equality of every field except the runtime.
    pub fn same_outcome(&self, other: &Self) -> bool {
        let mut a = self.clone();
        a.runtime_secs = other.runtime_secs;
        &a == other
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        serde_json::to_writer_pretty(&mut w, self).map_err(|e| Error::Numeric(format!("json: {e}")))?;
        writeln!(w).and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
    }
}

/// Writes `replica,seed,raw,s` rows.
pub fn write_samples_csv(path: &Path, rows: &[SampleRow]) -> Result<()> {
    let io = |e: csv::Error| Error::io(path, std::io::Error::other(e));
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path).map_err(io)?;
    w.write_record(["replica", "seed", "raw", "s"]).map_err(io)?;
    for r in rows {
        w.serialize(r).map_err(io)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
