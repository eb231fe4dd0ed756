//! JSON documents printed by `--json`. Every one reads back into the same struct.

use serde::{Deserialize, Serialize};
pub use technic::locus::LocusReport;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelEntry {
    pub name: String,
    pub description: String,
    pub joints: usize,
    pub bars: usize,
    pub sweep: (f64, f64),
    pub straight_window: Option<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub name: String,
    pub valid: bool,
    pub mobility: i64,
    pub checks: Vec<CheckEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventEntry {
    pub theta: f64,
    pub kind: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    pub model: String,
    pub samples: usize,
    pub theta_start: f64,
    pub theta_end: f64,
    pub max_residual: f64,
    pub events: Vec<EventEntry>,
    pub svg: Option<String>,
    pub csv: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocusDocument {
    pub model: String,
    pub variables: Vec<String>,
    pub generators: Vec<String>,
    #[serde(flatten)]
    pub locus: LocusReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    ExactLine,
    Approximate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifyReport {
    pub model: String,
    pub verdict: VerdictKind,
    /// `a*x + b*y + c = 0` for an exact line.
    pub line: Option<String>,
    pub window: (f64, f64),
    pub samples: usize,
    pub locus_degree: u32,
    /// Units; only for approximate verdicts.
    pub max_deviation: Option<f64>,
    pub max_deviation_mm: Option<f64>,
    pub span_mm: Option<f64>,
    pub line_distances: Vec<(String, f64)>,
    pub cofactor_residual: Option<f64>,
    pub diagnostics: Vec<String>,
    pub rationale: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BomLine {
    pub code: u32,
    pub name: String,
    pub color: String,
    pub count: u32,
    pub unit_price: String,
    pub subtotal: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BomReport {
    pub models: Vec<String>,
    pub vendor: String,
    pub simultaneous: bool,
    pub parts: Vec<BomLine>,
    pub total_parts: u32,
    /// Rounded to four decimals.
    pub total_price: String,
    /// Exact, as a reduced fraction.
    pub total_price_exact: String,
    pub note: String,
}
