//! Report records and their byte-stable serialization.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), enough to
//! round-trip every f64 exactly, so emitted files are byte-identical
//! across reruns of the same configuration (timing aside).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::harness::config::Suite;

/// One (suite, group, cell, trial) measurement.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct RatioReport {
    pub suite: Suite,
    pub group: String,
    pub params: BTreeMap<String, f64>,
    pub trial: usize,
    pub seed: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub wall_time_ms: f64,
}

/// Output encodings for [`emit_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::InvalidConfig(format!("unknown report format {other:?}"))),
        }
    }
}

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON array of report records, floats at 17 significant digits.
pub fn to_json_string(reports: &[RatioReport]) -> String {
    if reports.is_empty() {
        return "[]".into();
    }
    let mut out = String::from("[\n");
    for (i, r) in reports.iter().enumerate() {
        let mut params = String::from("{");
        for (j, (k, v)) in r.params.iter().enumerate() {
            if j > 0 {
                params.push_str(", ");
            }
            let _ = write!(params, "\"{k}\": {}", fmt_float(*v));
        }
        params.push('}');
        let _ = write!(
            out,
            "  {{\"suite\": \"{}\", \"group\": \"{}\", \"params\": {}, \"trial\": {}, \"seed\": {}, \"lhs\": {}, \"rhs\": {}, \"ratio\": {}, \"wall_time_ms\": {}}}",
            r.suite,
            r.group,
            params,
            r.trial,
            r.seed,
            fmt_float(r.lhs),
            fmt_float(r.rhs),
            fmt_float(r.ratio),
            fmt_float(r.wall_time_ms),
        );
        out.push_str(if i + 1 < reports.len() { ",\n" } else { "\n" });
    }
    out.push(']');
    out
}

/// CSV with the header `suite,group,params,trial,seed,lhs,rhs,ratio,wall_time_ms`;
/// params are semicolon-joined `key=value` pairs in key order.
pub fn to_csv_string(reports: &[RatioReport]) -> String {
    let mut out = String::from("suite,group,params,trial,seed,lhs,rhs,ratio,wall_time_ms\n");
    for r in reports {
        let params = r
            .params
            .iter()
            .map(|(k, v)| format!("{k}={}", fmt_float(*v)))
            .collect::<Vec<_>>()
            .join(";");
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.suite,
            r.group,
            params,
            r.trial,
            r.seed,
            fmt_float(r.lhs),
            fmt_float(r.rhs),
            fmt_float(r.ratio),
            fmt_float(r.wall_time_ms),
        );
    }
    out
}

/// Writes the reports to `path` in the requested format.
pub fn emit_report(reports: &[RatioReport], format: ReportFormat, path: &Path) -> Result<()> {
    let body = match format {
        ReportFormat::Json => to_json_string(reports),
        ReportFormat::Csv => to_csv_string(reports),
    };
    fs::write(path, body).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Parses a JSON report file back into records.
pub fn parse_json(body: &str) -> Result<Vec<RatioReport>> {
    serde_json::from_str(body).map_err(|e| Error::InvalidInput(format!("bad report JSON: {e}")))
}
