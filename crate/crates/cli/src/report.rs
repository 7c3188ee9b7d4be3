//! The machine-readable run report printed with `--json`.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

pub const TOOL: &str = "wilfpoly";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Bumped whenever a field is renamed, removed or changes meaning.
pub const REPORT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool) -> Self {
        Check {
            name: name.into(),
            pass,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub format_version: u32,
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub result: Value,
    pub checks: Vec<Check>,
    pub status: Status,
    /// Wall-clock milliseconds per phase; only present with `--timings`, so that the default
    /// output is byte-identical across runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

impl RunReport {
    pub fn new(
        command: &str,
        parameters: BTreeMap<String, Value>,
        result: Value,
        checks: Vec<Check>,
    ) -> Self {
        let status = if checks.iter().all(|c| c.pass) {
            Status::Pass
        } else {
            Status::Fail
        };
        RunReport {
            tool: TOOL,
            version: VERSION,
            format_version: REPORT_FORMAT_VERSION,
            command: command.to_string(),
            parameters,
            result,
            checks,
            status,
            timings_ms: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// A finished command: the report plus the lines shown without `--json`.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: RunReport,
    pub lines: Vec<String>,
}

impl Outcome {
    /// Human-readable rendering: the result lines, then one line per check.
    pub fn to_text(&self) -> String {
        let mut out: Vec<String> = self.lines.clone();
        for c in &self.report.checks {
            let mut line = format!("{} {}", if c.pass { "PASS" } else { "FAIL" }, c.name);
            if let Some(d) = &c.detail {
                line.push_str(": ");
                line.push_str(d);
            }
            out.push(line);
        }
        out.join("\n")
    }
}
