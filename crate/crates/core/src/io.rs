//! On-disk formats: the JSON state file, the flat report object, and the CSV
//! row formats shared by the CLI and the golden tests.
//!
//! All floating point numbers are written in shortest round-trip form (the
//! serde_json/ryu rendering), which preserves the full 17-significant-digit
//! content of an IEEE double, so rereading a file reproduces the exact bits.

use crate::channels::{ChannelModel, EvolutionMethod};
use crate::duality::DualityReport;
use crate::error::{Error, Result};
use crate::linalg::{c, Mat4};
use crate::state::{CoherencePolarizationMatrix, BASIS_LABELS};
use serde::{Deserialize, Serialize};

/// JSON state file: fixed basis labels, the 4x4 matrix as row-major
/// [re, im] pairs, and an optional label.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub basis: [String; 4],
    pub rho: [[[f64; 2]; 4]; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Render a state to the JSON file format.
pub fn state_to_json(rho: &CoherencePolarizationMatrix, label: Option<&str>) -> String {
    let mut grid = [[[0.0f64; 2]; 4]; 4];
    for (i, row) in grid.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let v = rho.entry(i, j);
            *cell = [v.re, v.im];
        }
    }
    let file = StateFile {
        basis: BASIS_LABELS.map(str::to_owned),
        rho: grid,
        label: label.map(str::to_owned),
    };
    serde_json::to_string_pretty(&file).expect("state serialization cannot fail")
}

/// Parse the JSON state file format. The basis must match the fixed order
/// exactly; the matrix itself is not validated here.
pub fn state_from_json(text: &str) -> Result<(CoherencePolarizationMatrix, Option<String>)> {
    let file: StateFile =
        serde_json::from_str(text).map_err(|e| Error::MalformedStateFile(e.to_string()))?;
    if file.basis.iter().map(String::as_str).ne(BASIS_LABELS) {
        return Err(Error::BasisMismatch { found: file.basis });
    }
    let mut m = Mat4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            m.e[i][j] = c(file.rho[i][j][0], file.rho[i][j][1]);
        }
    }
    Ok((CoherencePolarizationMatrix::from_matrix(m), file.label))
}

/// Shortest round-trip rendering of a float.
pub fn fmt_f64(x: f64) -> String {
    serde_json::to_string(&x).expect("finite float")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// Column header of the single-state report CSV.
pub const REPORT_CSV_HEADER: &str = "label,I1,I2,mu_abs,mu_phase,p1,p2,V,D,D2_plus_V2";

/// One report as a CSV row; undefined fields become empty cells.
pub fn report_csv_row(report: &DualityReport, label: Option<&str>) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        label.unwrap_or(""),
        fmt_f64(report.i1),
        fmt_f64(report.i2),
        fmt_opt(report.mu_abs),
        fmt_opt(report.mu_phase),
        fmt_opt(report.p1),
        fmt_opt(report.p2),
        fmt_f64(report.visibility),
        fmt_f64(report.distinguishability),
        fmt_f64(report.d2_plus_v2),
    )
}

#[derive(Serialize)]
struct ReportObject<'a> {
    label: Option<&'a str>,
    #[serde(rename = "I1")]
    i1: f64,
    #[serde(rename = "I2")]
    i2: f64,
    mu_abs: Option<f64>,
    mu_phase: Option<f64>,
    p1: Option<f64>,
    p2: Option<f64>,
    #[serde(rename = "V")]
    visibility: f64,
    #[serde(rename = "D")]
    distinguishability: f64,
    #[serde(rename = "D2_plus_V2")]
    d2_plus_v2: f64,
}

/// One report as a flat JSON object; undefined fields become explicit nulls.
pub fn report_to_json(report: &DualityReport, label: Option<&str>) -> String {
    let obj = ReportObject {
        label,
        i1: report.i1,
        i2: report.i2,
        mu_abs: report.mu_abs,
        mu_phase: report.mu_phase,
        p1: report.p1,
        p2: report.p2,
        visibility: report.visibility,
        distinguishability: report.distinguishability,
        d2_plus_v2: report.d2_plus_v2,
    };
    serde_json::to_string(&obj).expect("report serialization cannot fail")
}

/// Comment header line of a trajectory CSV.
pub fn trajectory_csv_header(
    model: ChannelModel,
    gamma_rate: f64,
    method: EvolutionMethod,
    n_steps: usize,
) -> String {
    format!(
        "# model={} gamma={} method={} n={}",
        model,
        fmt_f64(gamma_rate),
        method,
        n_steps
    )
}

/// Column header of a trajectory CSV.
pub const TRAJECTORY_CSV_COLUMNS: &str = "time,V,D,D2_plus_V2,mu_abs,p1,p2,I1,I2";

/// One trajectory point as a CSV row.
pub fn trajectory_csv_row(t: f64, report: &DualityReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{}",
        fmt_f64(t),
        fmt_f64(report.visibility),
        fmt_f64(report.distinguishability),
        fmt_f64(report.d2_plus_v2),
        fmt_opt(report.mu_abs),
        fmt_opt(report.p1),
        fmt_opt(report.p2),
        fmt_f64(report.i1),
        fmt_f64(report.i2),
    )
}
