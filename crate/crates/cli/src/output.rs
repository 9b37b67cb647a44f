//! Output assembly and emission. Everything written here is byte-deterministic
//! for a fixed invocation: floats render in shortest round-trip form and all
//! line endings are LF.

use crate::CliError;
use duality_core::io::fmt_f64;
use duality_core::DualityReport;
use serde::Serialize;
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

pub fn parse_format(s: &str) -> Result<OutputFormat, CliError> {
    match s {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        other => Err(CliError::usage(format!(
            "unknown format '{other}' (expected csv or json)"
        ))),
    }
}

/// Write to the output file, or stdout when no path was given.
pub fn emit(out: Option<&PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|e| {
            CliError::usage(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// The emitter re-checks the range invariants of every row before writing;
/// a violation is an internal fault, not a user error.
pub fn check_report_ranges(report: &DualityReport, tol: f64) -> Result<(), CliError> {
    let defect = report.range_defect();
    if defect > tol {
        return Err(CliError::usage(format!(
            "internal error: emitted report violates range invariants by {defect:e}"
        )));
    }
    Ok(())
}

#[derive(Serialize)]
pub struct SweepMeta {
    pub family: String,
    pub param: &'static str,
    pub start: f64,
    pub stop: f64,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
}

#[derive(Serialize)]
#[allow(non_snake_case)]
pub struct SweepRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    pub V: f64,
    pub D: f64,
    pub D2_plus_V2: f64,
}

impl SweepRow {
    fn value(&self) -> f64 {
        self.a.or(self.eta).expect("one sweep parameter is set")
    }
}

pub fn sweep_csv(meta: &SweepMeta, rows: &[SweepRow]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# family={} param={} start={} stop={} samples={}",
        meta.family,
        meta.param,
        fmt_f64(meta.start),
        fmt_f64(meta.stop),
        meta.samples
    ));
    if let Some(b) = meta.b {
        out.push_str(&format!(" b={}", fmt_f64(b)));
    }
    out.push('\n');
    out.push_str(&format!("{},V,D,D2_plus_V2\n", meta.param));
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(row.value()),
            fmt_f64(row.V),
            fmt_f64(row.D),
            fmt_f64(row.D2_plus_V2)
        ));
    }
    out
}

#[derive(Serialize)]
struct SweepDocument<'a> {
    meta: &'a SweepMeta,
    rows: &'a [SweepRow],
}

pub fn sweep_json(meta: &SweepMeta, rows: &[SweepRow]) -> String {
    let mut text = serde_json::to_string(&SweepDocument { meta, rows }).expect("serializable");
    text.push('\n');
    text
}

#[derive(Serialize)]
pub struct EvolveMeta {
    pub model: String,
    pub gamma: f64,
    pub method: String,
    pub n: usize,
    pub initial: String,
    #[serde(rename = "t-max")]
    pub t_max: f64,
    pub steps: usize,
    pub tol: f64,
}

#[derive(Serialize)]
#[allow(non_snake_case)]
pub struct TrajectoryRow {
    pub time: f64,
    pub V: f64,
    pub D: f64,
    pub D2_plus_V2: f64,
    pub mu_abs: Option<f64>,
    pub p1: Option<f64>,
    pub p2: Option<f64>,
    pub I1: f64,
    pub I2: f64,
}

impl TrajectoryRow {
    pub fn new(time: f64, report: &DualityReport) -> Self {
        Self {
            time,
            V: report.visibility,
            D: report.distinguishability,
            D2_plus_V2: report.d2_plus_v2,
            mu_abs: report.mu_abs,
            p1: report.p1,
            p2: report.p2,
            I1: report.i1,
            I2: report.i2,
        }
    }
}

pub fn trajectory_csv(
    meta: &EvolveMeta,
    points: &[(f64, DualityReport)],
) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# model={} gamma={} method={} n={}\n",
        meta.model,
        fmt_f64(meta.gamma),
        meta.method,
        meta.n
    ));
    out.push_str(&format!(
        "# initial={} t-max={} steps={} tol={}\n",
        meta.initial,
        fmt_f64(meta.t_max),
        meta.steps,
        fmt_f64(meta.tol)
    ));
    out.push_str(duality_core::io::TRAJECTORY_CSV_COLUMNS);
    out.push('\n');
    for (t, report) in points {
        out.push_str(&duality_core::io::trajectory_csv_row(*t, report));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct EvolveDocument<'a> {
    meta: &'a EvolveMeta,
    rows: Vec<TrajectoryRow>,
}

pub fn trajectory_json(meta: &EvolveMeta, points: &[(f64, DualityReport)]) -> String {
    let rows = points
        .iter()
        .map(|(t, r)| TrajectoryRow::new(*t, r))
        .collect();
    let mut text =
        serde_json::to_string(&EvolveDocument { meta, rows }).expect("serializable");
    text.push('\n');
    text
}

#[derive(Serialize)]
pub struct ScreenMeta {
    pub state: String,
    pub k: f64,
    pub d: f64,
    #[serde(rename = "L")]
    pub big_l: f64,
    #[serde(rename = "x-min")]
    pub x_min: f64,
    #[serde(rename = "x-max")]
    pub x_max: f64,
    pub samples: usize,
    pub tol: f64,
}

pub fn screen_csv(
    meta: &ScreenMeta,
    rows: &[(f64, f64)],
    visibility_numeric: f64,
    visibility_analytic: f64,
) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# state={} k={} d={} L={} x-min={} x-max={} samples={} tol={}\n",
        meta.state,
        fmt_f64(meta.k),
        fmt_f64(meta.d),
        fmt_f64(meta.big_l),
        fmt_f64(meta.x_min),
        fmt_f64(meta.x_max),
        meta.samples,
        fmt_f64(meta.tol)
    ));
    out.push_str("x,intensity\n");
    for (x, intensity) in rows {
        out.push_str(&format!("{},{}\n", fmt_f64(*x), fmt_f64(*intensity)));
    }
    out.push_str(&format!(
        "# visibility_numeric={} visibility_analytic={}\n",
        fmt_f64(visibility_numeric),
        fmt_f64(visibility_analytic)
    ));
    out
}

#[derive(Serialize)]
struct ScreenRow {
    x: f64,
    intensity: f64,
}

#[derive(Serialize)]
struct ScreenDocument<'a> {
    meta: &'a ScreenMeta,
    rows: Vec<ScreenRow>,
    visibility_numeric: f64,
    visibility_analytic: f64,
}

pub fn screen_json(
    meta: &ScreenMeta,
    rows: &[(f64, f64)],
    visibility_numeric: f64,
    visibility_analytic: f64,
) -> String {
    let rows = rows
        .iter()
        .map(|&(x, intensity)| ScreenRow { x, intensity })
        .collect();
    let mut text = serde_json::to_string(&ScreenDocument {
        meta,
        rows,
        visibility_numeric,
        visibility_analytic,
    })
    .expect("serializable");
    text.push('\n');
    text
}
