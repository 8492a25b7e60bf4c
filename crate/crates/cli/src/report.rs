//! JSON report document.
//!
//! Floats are written with 17 significant digits so that parsing a report
//! gives back the exact `f64` values. The schema is versioned by
//! [`SCHEMA_VERSION`]; the layout is described in `docs/report-schema.md`.

use std::io;

use chi_audit_core::{AssumptionReport, InvariantDecision, Matrix, PearsonResult, ScalingAudit};
use serde::{Deserialize, Serialize};

use crate::input::LoadedTable;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_NAME: &str = "chi-audit";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl Default for ToolInfo {
    fn default() -> Self {
        ToolInfo { name: TOOL_NAME.to_owned(), version: env!("CARGO_PKG_VERSION").to_owned() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputSummary {
    pub path: String,
    pub sha256: String,
    pub rows: usize,
    pub cols: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub col_labels: Option<Vec<String>>,
    pub observed: Matrix,
}

impl From<&LoadedTable> for InputSummary {
    fn from(loaded: &LoadedTable) -> Self {
        let t = &loaded.table;
        InputSummary {
            path: loaded.path.clone(),
            sha256: loaded.sha256.clone(),
            rows: t.rows(),
            cols: t.cols(),
            row_labels: t.row_labels().map(<[String]>::to_vec),
            col_labels: t.col_labels().map(<[String]>::to_vec),
            observed: t.observed().clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: ToolInfo,
    pub command: String,
    /// Seconds since the Unix epoch; absent with `--no-timestamp`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub input: InputSummary,
    pub pearson: PearsonResult,
    pub assumptions: AssumptionReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaling_audit: Option<ScalingAudit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariant: Option<InvariantDecision>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

/// Compact JSON with every float in `{:.16e}` form.
struct SignificantDigits;

impl serde_json::ser::Formatter for SignificantDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        write!(writer, "{:.16e}", f64::from(value))
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut buf = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, SignificantDigits);
        self.serialize(&mut ser).expect("report values are finite or encoded");
        String::from_utf8(buf).expect("serde_json writes UTF-8")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Report> {
        serde_json::from_str(s)
    }
}
