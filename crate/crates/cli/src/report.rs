//! Report artifacts. Everything is assembled in memory and written once.

use std::path::{Path, PathBuf};

use asymlen::asymptotics::LimitEstimate;
use asymlen::rational::{fmt_q, to_f64};
use asymlen::Q;
use serde_json::{json, Value};

use crate::error::{CliError, Result};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub result: Value,
    pub checks: Vec<Check>,
    pub summary: Vec<String>,
    pub svg: Option<String>,
}

impl Report {
    pub fn new(command: &'static str, inputs: Value, header: Vec<&'static str>) -> Self {
        Self {
            command,
            inputs,
            header,
            rows: Vec::new(),
            result: json!({}),
            checks: Vec::new(),
            summary: Vec::new(),
            svg: None,
        }
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> =
            self.checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect();
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "inputs": self.inputs,
            "result": self.result,
            "checks": checks,
            "status": if self.passed() { "pass" } else { "fail" },
        })
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let internal = |e: csv::Error| CliError::Internal(e.to_string());
        w.write_record(&self.header).map_err(internal)?;
        for row in &self.rows {
            w.write_record(row).map_err(internal)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
    }

    /// Writes `<command>.csv`, `<command>.json` and, if present,
    /// `<command>.svg` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let csv = self.to_csv()?;
        let mut json = serde_json::to_string_pretty(&self.to_json()).map_err(|e| CliError::Internal(e.to_string()))?;
        json.push('\n');
        let mut files = vec![(format!("{}.csv", self.command), csv), (format!("{}.json", self.command), json)];
        if let Some(svg) = &self.svg {
            files.push((format!("{}.svg", self.command), svg.clone()));
        }
        std::fs::create_dir_all(dir).map_err(CliError::io(format!("creating {}", dir.display())))?;
        let mut written = Vec::new();
        for (name, text) in files {
            let path = dir.join(name);
            std::fs::write(&path, text).map_err(CliError::io(format!("writing {}", path.display())))?;
            written.push(path);
        }
        Ok(written)
    }
}

pub fn q_json(x: &Q) -> Value {
    json!(fmt_q(x))
}

pub fn estimate_json(e: &LimitEstimate) -> Value {
    json!({
        "point_estimate": fmt_q(&e.point_estimate),
        "point_estimate_f64": to_f64(&e.point_estimate),
        "tail_min": fmt_q(&e.tail_min),
        "tail_max": fmt_q(&e.tail_max),
        "relative_range": e.relative_range(),
        "verdict": e.verdict.to_string(),
        "window": [e.window.0, e.window.1],
    })
}

pub fn estimate_line(label: &str, e: &LimitEstimate) -> String {
    format!(
        "{label}: {:.6} ({}, tail range {:.2e} over n in [{}, {}])",
        to_f64(&e.point_estimate),
        e.verdict,
        e.relative_range(),
        e.window.0,
        e.window.1
    )
}
