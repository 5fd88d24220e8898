//! Run reports: config echo, per-operation results with tolerance and method
//! tags, invariant-check outcomes, and seed provenance.
//!
//! Reports serialize to JSON with a stable field order and no timestamps, so
//! identical config + seed produces byte-identical output; wall-clock timing
//! goes into a separate sidecar.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

/// A reported number with its tolerance and the method that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct Measured {
    pub value: f64,
    /// Tolerance the value is trusted to (absolute unless stated otherwise
    /// in the method tag).
    pub tol: f64,
    pub method: String,
}

impl Measured {
    pub fn new(value: f64, tol: f64, method: impl Into<String>) -> Self {
        Self { value, tol, method: method.into() }
    }
}

/// Outcome of one invariant check.
#[derive(Debug, Clone, Serialize)]
pub struct InvariantOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Top-level run report emitted by every CLI subcommand.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub experiment: String,
    pub seed: u64,
    pub rng_algorithm: String,
    /// Verbatim echo of the parsed config (canonical TOML).
    pub config_echo: String,
    /// Named results, ordered by key.
    pub results: BTreeMap<String, Measured>,
    /// Structured payloads too rich for a single number (suite tables,
    /// sweep summaries), serialized as JSON values.
    pub details: BTreeMap<String, serde_json::Value>,
    pub invariants: Vec<InvariantOutcome>,
}

/// Wall-clock sidecar, written next to the main report.
#[derive(Debug, Clone, Serialize)]
pub struct TimingSidecar {
    pub experiment: String,
    pub wall_clock_seconds: f64,
}

impl RunReport {
    pub fn new(experiment: impl Into<String>, seed: u64, config_echo: String) -> Self {
        Self {
            experiment: experiment.into(),
            seed,
            rng_algorithm: crate::rng::RNG_ALGORITHM.into(),
            config_echo,
            results: BTreeMap::new(),
            details: BTreeMap::new(),
            invariants: Vec::new(),
        }
    }

    pub fn push_result(&mut self, name: impl Into<String>, m: Measured) {
        self.results.insert(name.into(), m);
    }

    pub fn push_detail<T: Serialize>(&mut self, name: impl Into<String>, value: &T) -> Result<()> {
        let v = serde_json::to_value(value).map_err(|e| Error::Config(e.to_string()))?;
        self.details.insert(name.into(), v);
        Ok(())
    }

    pub fn push_invariant(&mut self, name: impl Into<String>, passed: bool, detail: String) {
        self.invariants.push(InvariantOutcome { name: name.into(), passed, detail });
    }

    pub fn all_invariants_pass(&self) -> bool {
        self.invariants.iter().all(|i| i.passed)
    }

    /// Deterministic pretty JSON.
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }
}

/// Write CSV rows with a header; plain string formatting keeps float output
/// identical across runs.
pub fn write_csv(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.12e}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
