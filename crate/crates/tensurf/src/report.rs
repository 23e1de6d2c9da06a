//! Rendering of identity reports and the other CLI row types to human
//! tables, CSV and JSON.
//!
//! Machine formats carry full precision (shortest round-trip float strings);
//! the human table prints residuals in scientific notation with three
//! significant digits.

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::identities::{IdentityReport, ReportValue};

/// Output format of the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(text: &str) -> Result<Self> {
        match text.to_ascii_lowercase().as_str() {
            "table" => Ok(OutputFormat::Table),
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(GeomError::InvalidParameter(format!(
                "unknown format '{other}'; valid formats: table, csv, json"
            ))),
        }
    }
}

fn value_to_string(value: &ReportValue) -> String {
    match value {
        ReportValue::Scalar(v) => format!("{v}"),
        ReportValue::Vector(v) => {
            let parts: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
            format!("[{}]", parts.join(", "))
        }
    }
}

fn value_to_short_string(value: &ReportValue) -> String {
    match value {
        ReportValue::Scalar(v) => format!("{v:.6}"),
        ReportValue::Vector(v) => {
            let parts: Vec<String> = v.iter().map(|x| format!("{x:.4}")).collect();
            format!("[{}]", parts.join(", "))
        }
    }
}

/// JSON array of report objects, stable field order, trailing newline.
pub fn render_json(reports: &[IdentityReport]) -> String {
    let mut text = serde_json::to_string_pretty(reports).expect("reports always serialize");
    text.push('\n');
    text
}

/// Parses a JSON report array (used by the round-trip contract).
pub fn parse_json(text: &str) -> serde_json::Result<Vec<IdentityReport>> {
    serde_json::from_str(text)
}

/// CSV with a header row; vectors are bracketed strings, quoted as needed.
pub fn render_csv(reports: &[IdentityReport]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record([
            "identity_id",
            "surface",
            "resolution",
            "lhs",
            "rhs",
            "residual",
            "tolerance",
            "pass",
            "wall_time_ms",
            "notes",
        ])
        .expect("in-memory csv");
    for report in reports {
        writer
            .write_record([
                report.identity_id.clone(),
                report.surface.clone(),
                report.resolution.clone(),
                value_to_string(&report.lhs),
                value_to_string(&report.rhs),
                format!("{}", report.residual),
                format!("{}", report.tolerance),
                report.pass.to_string(),
                format!("{}", report.wall_time_ms),
                report.notes.clone(),
            ])
            .expect("in-memory csv");
    }
    String::from_utf8(writer.into_inner().expect("in-memory csv")).expect("csv is utf-8")
}

/// Fixed-width table for terminals.
pub fn render_table(reports: &[IdentityReport]) -> String {
    let mut rows: Vec<[String; 7]> = vec![[
        "identity".into(),
        "surface".into(),
        "resolution".into(),
        "residual".into(),
        "tolerance".into(),
        "result".into(),
        "lhs".into(),
    ]];
    for report in reports {
        rows.push([
            report.identity_id.clone(),
            report.surface.clone(),
            report.resolution.clone(),
            format!("{:.2e}", report.residual),
            format!("{:.2e}", report.tolerance),
            if report.pass { "pass".into() } else { "FAIL".into() },
            value_to_short_string(&report.lhs),
        ]);
    }
    let mut widths = [0usize; 7];
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for (i, row) in rows.iter().enumerate() {
        let line: Vec<String> =
            row.iter().zip(&widths).map(|(cell, w)| format!("{cell:<w$}")).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
        if i == 0 {
            let total: usize = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
            out.push_str(&"-".repeat(total));
            out.push('\n');
        }
    }
    out
}

/// One pointwise-residual result row (structural equations on a sample
/// grid, or chart checks).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointwiseRow {
    pub subject: String,
    pub check: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn render_pointwise_json(rows: &[PointwiseRow]) -> String {
    let mut text = serde_json::to_string_pretty(rows).expect("rows always serialize");
    text.push('\n');
    text
}

pub fn render_pointwise_csv(rows: &[PointwiseRow]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["subject", "check", "samples", "max_residual", "tolerance", "pass"])
        .expect("in-memory csv");
    for row in rows {
        writer
            .write_record([
                row.subject.clone(),
                row.check.clone(),
                row.samples.to_string(),
                format!("{}", row.max_residual),
                format!("{}", row.tolerance),
                row.pass.to_string(),
            ])
            .expect("in-memory csv");
    }
    String::from_utf8(writer.into_inner().expect("in-memory csv")).expect("csv is utf-8")
}

pub fn render_pointwise_table(rows: &[PointwiseRow]) -> String {
    let mut table: Vec<[String; 6]> = vec![[
        "subject".into(),
        "check".into(),
        "samples".into(),
        "max residual".into(),
        "tolerance".into(),
        "result".into(),
    ]];
    for row in rows {
        table.push([
            row.subject.clone(),
            row.check.clone(),
            row.samples.to_string(),
            format!("{:.2e}", row.max_residual),
            format!("{:.2e}", row.tolerance),
            if row.pass { "pass".into() } else { "FAIL".into() },
        ]);
    }
    let mut widths = [0usize; 6];
    for row in &table {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for (i, row) in table.iter().enumerate() {
        let line: Vec<String> =
            row.iter().zip(&widths).map(|(cell, w)| format!("{cell:<w$}")).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
        if i == 0 {
            let total: usize = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
            out.push_str(&"-".repeat(total));
            out.push('\n');
        }
    }
    out
}

/// One convergence-study row.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub identity_id: String,
    pub surface: String,
    pub resolution: String,
    pub residual: f64,
    /// log₂ of the residual drop against the previous resolution, per
    /// doubling; absent on the first row of a series.
    pub observed_order: Option<f64>,
}

pub fn render_convergence_json(rows: &[ConvergenceRow]) -> String {
    let mut text = serde_json::to_string_pretty(rows).expect("rows always serialize");
    text.push('\n');
    text
}

pub fn render_convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["identity_id", "surface", "resolution", "residual", "observed_order"])
        .expect("in-memory csv");
    for row in rows {
        writer
            .write_record([
                row.identity_id.clone(),
                row.surface.clone(),
                row.resolution.clone(),
                format!("{}", row.residual),
                row.observed_order.map(|o| format!("{o}")).unwrap_or_default(),
            ])
            .expect("in-memory csv");
    }
    String::from_utf8(writer.into_inner().expect("in-memory csv")).expect("csv is utf-8")
}

pub fn render_convergence_table(rows: &[ConvergenceRow]) -> String {
    let mut table: Vec<[String; 5]> = vec![[
        "identity".into(),
        "surface".into(),
        "resolution".into(),
        "residual".into(),
        "order".into(),
    ]];
    for row in rows {
        table.push([
            row.identity_id.clone(),
            row.surface.clone(),
            row.resolution.clone(),
            format!("{:.2e}", row.residual),
            row.observed_order.map(|o| format!("{o:.2}")).unwrap_or_else(|| "-".into()),
        ]);
    }
    let mut widths = [0usize; 5];
    for row in &table {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for (i, row) in table.iter().enumerate() {
        let line: Vec<String> =
            row.iter().zip(&widths).map(|(cell, w)| format!("{cell:<w$}")).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
        if i == 0 {
            let total: usize = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
            out.push_str(&"-".repeat(total));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_reports() -> Vec<IdentityReport> {
        vec![
            IdentityReport {
                identity_id: "IN=0".into(),
                surface: "sphere:r=1".into(),
                resolution: "64x64".into(),
                lhs: ReportValue::Vector(vec![1.2e-13, -3.0e-14, 0.0]),
                rhs: ReportValue::Vector(vec![0.0, 0.0, 0.0]),
                residual: 1.2e-13,
                tolerance: 1e-8,
                pass: true,
                notes: String::new(),
                wall_time_ms: 0.0,
            },
            IdentityReport {
                identity_id: "IR.N".into(),
                surface: "torus:R=2,r=0.5".into(),
                resolution: "64x64".into(),
                lhs: ReportValue::Scalar(29.608813203268074),
                rhs: ReportValue::Scalar(29.608813203268077),
                residual: 3.552713678800501e-15,
                tolerance: 1e-8,
                pass: true,
                notes: "volume from analytic hint".into(),
                wall_time_ms: 0.0,
            },
        ]
    }

    #[test]
    fn json_round_trip_is_idempotent() {
        let reports = sample_reports();
        let first = render_json(&reports);
        let parsed = parse_json(&first).unwrap();
        let second = render_json(&parsed);
        assert_eq!(first, second);
        assert_eq!(parsed, reports);
    }

    #[test]
    fn json_carries_required_keys() {
        let text = render_json(&sample_reports());
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        let first = &value.as_array().unwrap()[0];
        for key in
            ["identity_id", "surface", "resolution", "lhs", "rhs", "residual", "tolerance", "pass", "wall_time_ms"]
        {
            assert!(first.get(key).is_some(), "missing key {key}");
        }
    }

    #[test]
    fn csv_has_header_and_quotes_vectors() {
        let text = render_csv(&sample_reports());
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "identity_id,surface,resolution,lhs,rhs,residual,tolerance,pass,wall_time_ms,notes"
        );
        let first = lines.next().unwrap();
        // The bracketed vector contains commas, so it must be quoted.
        assert!(first.contains("\"["));
        // The torus selector contains a comma and must be quoted as well.
        let second = lines.next().unwrap();
        assert!(second.contains("\"torus:R=2,r=0.5\""));
    }

    #[test]
    fn table_marks_failures() {
        let mut reports = sample_reports();
        reports[0].pass = false;
        let table = render_table(&reports);
        assert!(table.contains("FAIL"));
        assert!(table.contains("pass"));
    }
}
