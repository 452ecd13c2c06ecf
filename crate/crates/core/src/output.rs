//! Report serialization: JSON report, CSV table, histogram and density
//! overlay grids, and the plain-text table printed by the CLI.
//!
//! Numbers in CSV files use 17 significant digits in scientific notation
//! (`{:.16e}`), which round-trips every `f64` and never depends on locale.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::analytic::{self, Backend, NormalApprox};
use crate::experiment::{ExperimentReport, ReportRow};

/// Points per overlay grid.
pub const OVERLAY_POINTS: usize = 512;

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("report has no histograms; rerun with histograms enabled (--histograms)")]
    NoHistograms,
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    Csv,
    Json,
    #[default]
    Both,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "both" => Ok(Self::Both),
            other => Err(format!(
                "unknown format '{other}' (expected csv, json or both)"
            )),
        }
    }
}

pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_file(path: &Path, contents: &str) -> Result<PathBuf, OutputError> {
    fs::write(path, contents).map_err(|source| OutputError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(path.to_path_buf())
}

/// Pretty JSON with struct-declaration key order and a trailing newline.
pub fn report_to_json(report: &ExperimentReport) -> Result<String, OutputError> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

pub fn report_from_json(json: &str) -> Result<ExperimentReport, OutputError> {
    Ok(serde_json::from_str(json)?)
}

pub const TABLE_HEADER: &str = "dim,empirical_mean,theoretical_mean,empirical_variance,\
theoretical_variance,mean_dev_se,var_dev_rel,backend,ks_exact,ks_normal,ks_critical_05,ks_critical_01";

/// One line of the CSV table. Goodness-of-fit fields are empty when the run
/// did not compute them.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRecord {
    pub dim: usize,
    pub empirical_mean: f64,
    pub theoretical_mean: f64,
    pub empirical_variance: f64,
    pub theoretical_variance: f64,
    pub mean_dev_se: f64,
    pub var_dev_rel: f64,
    pub backend: Option<Backend>,
    pub ks_exact: Option<f64>,
    pub ks_normal: Option<f64>,
    pub ks_critical_05: Option<f64>,
    pub ks_critical_01: Option<f64>,
}

impl From<&ReportRow> for TableRecord {
    fn from(row: &ReportRow) -> Self {
        let gof = row.gof.as_ref();
        Self {
            dim: row.dim,
            empirical_mean: row.empirical_mean,
            theoretical_mean: row.theoretical_mean,
            empirical_variance: row.empirical_variance,
            theoretical_variance: row.theoretical_variance,
            mean_dev_se: row.mean_dev_se,
            var_dev_rel: row.var_dev_rel,
            backend: gof.map(|g| g.backend),
            ks_exact: gof.and_then(|g| g.ks_exact),
            ks_normal: gof.map(|g| g.ks_normal),
            ks_critical_05: gof.map(|g| g.ks_critical_05),
            ks_critical_01: gof.map(|g| g.ks_critical_01),
        }
    }
}

impl TableRecord {
    pub fn to_csv_line(&self) -> String {
        let opt = |x: Option<f64>| x.map(fmt_num).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.dim,
            fmt_num(self.empirical_mean),
            fmt_num(self.theoretical_mean),
            fmt_num(self.empirical_variance),
            fmt_num(self.theoretical_variance),
            fmt_num(self.mean_dev_se),
            fmt_num(self.var_dev_rel),
            self.backend.map(Backend::as_str).unwrap_or_default(),
            opt(self.ks_exact),
            opt(self.ks_normal),
            opt(self.ks_critical_05),
            opt(self.ks_critical_01),
        )
    }

    pub fn parse_csv_line(line: &str, line_no: usize) -> Result<Self, OutputError> {
        let err = |message: String| OutputError::Parse {
            line: line_no,
            message,
        };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 12 {
            return Err(err(format!("expected 12 fields, found {}", fields.len())));
        }
        let num = |i: usize| -> Result<f64, OutputError> {
            fields[i]
                .parse()
                .map_err(|e| err(format!("field {}: {e}", i + 1)))
        };
        let opt = |i: usize| -> Result<Option<f64>, OutputError> {
            if fields[i].is_empty() {
                Ok(None)
            } else {
                num(i).map(Some)
            }
        };
        let backend = match fields[7] {
            "" => None,
            "exact" => Some(Backend::Exact),
            "normal_only" => Some(Backend::NormalOnly),
            other => return Err(err(format!("unknown backend '{other}'"))),
        };
        Ok(Self {
            dim: fields[0]
                .parse()
                .map_err(|e| err(format!("field 1: {e}")))?,
            empirical_mean: num(1)?,
            theoretical_mean: num(2)?,
            empirical_variance: num(3)?,
            theoretical_variance: num(4)?,
            mean_dev_se: num(5)?,
            var_dev_rel: num(6)?,
            backend,
            ks_exact: opt(8)?,
            ks_normal: opt(9)?,
            ks_critical_05: opt(10)?,
            ks_critical_01: opt(11)?,
        })
    }
}

pub fn table_csv(records: &[TableRecord]) -> String {
    let mut s = String::from(TABLE_HEADER);
    s.push('\n');
    for r in records {
        s.push_str(&r.to_csv_line());
        s.push('\n');
    }
    s
}

pub fn report_table_csv(report: &ExperimentReport) -> String {
    let records: Vec<TableRecord> = report.rows.iter().map(TableRecord::from).collect();
    table_csv(&records)
}

pub fn parse_table_csv(text: &str) -> Result<Vec<TableRecord>, OutputError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(TABLE_HEADER) => {}
        _ => {
            return Err(OutputError::Parse {
                line: 1,
                message: "missing or unexpected header".into(),
            })
        }
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| TableRecord::parse_csv_line(l, i + 2))
        .collect()
}

pub fn histogram_csv(row: &ReportRow) -> Option<String> {
    let hist = row.histogram.as_ref()?;
    let mut s = String::from("bin_left,bin_right,density\n");
    for (l, r, d) in hist.rows() {
        let _ = writeln!(s, "{},{},{}", fmt_num(l), fmt_num(r), fmt_num(d));
    }
    Some(s)
}

/// Exact (when available) and normal densities on [`OVERLAY_POINTS`]
/// evenly spaced points over the histogram range. Dimensions above the
/// exact backend's ceiling get no `exact_pdf` column.
pub fn overlay_csv(row: &ReportRow) -> Option<String> {
    let hist = row.histogram.as_ref()?;
    let (lo, hi) = hist.range();
    let exact = analytic::exact_density(row.dim).ok();
    let normal = NormalApprox::for_dim(row.dim).ok()?;
    let mut s = String::from(if exact.is_some() {
        "x,exact_pdf,normal_pdf\n"
    } else {
        "x,normal_pdf\n"
    });
    let step = (hi - lo) / (OVERLAY_POINTS - 1) as f64;
    for i in 0..OVERLAY_POINTS {
        let x = if i == OVERLAY_POINTS - 1 {
            hi
        } else {
            lo + i as f64 * step
        };
        match &exact {
            Some(d) => {
                let _ = writeln!(
                    s,
                    "{},{},{}",
                    fmt_num(x),
                    fmt_num(d.eval(x)),
                    fmt_num(normal.pdf(x))
                );
            }
            None => {
                let _ = writeln!(s, "{},{}", fmt_num(x), fmt_num(normal.pdf(x)));
            }
        }
    }
    Some(s)
}

/// Writes `hist_n{dim}.csv` and `overlay_n{dim}.csv` for every row.
pub fn emit_figure_data(
    report: &ExperimentReport,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, OutputError> {
    if report.rows.iter().any(|r| r.histogram.is_none()) {
        return Err(OutputError::NoHistograms);
    }
    let mut paths = Vec::with_capacity(2 * report.rows.len());
    for row in &report.rows {
        let hist = histogram_csv(row).ok_or(OutputError::NoHistograms)?;
        let overlay = overlay_csv(row).ok_or(OutputError::NoHistograms)?;
        paths.push(write_file(
            &out_dir.join(format!("hist_n{}.csv", row.dim)),
            &hist,
        )?);
        paths.push(write_file(
            &out_dir.join(format!("overlay_n{}.csv", row.dim)),
            &overlay,
        )?);
    }
    Ok(paths)
}

/// Writes `report.json` and/or `table.csv`, plus figure data when the report
/// carries histograms. Returns the paths written, in order.
pub fn write_bundle(
    report: &ExperimentReport,
    out_dir: &Path,
    format: OutputFormat,
) -> Result<Vec<PathBuf>, OutputError> {
    let mut paths = Vec::new();
    if matches!(format, OutputFormat::Json | OutputFormat::Both) {
        paths.push(write_file(
            &out_dir.join("report.json"),
            &report_to_json(report)?,
        )?);
    }
    if matches!(format, OutputFormat::Csv | OutputFormat::Both) {
        paths.push(write_file(
            &out_dir.join("table.csv"),
            &report_table_csv(report),
        )?);
    }
    if !report.rows.is_empty() && report.rows.iter().all(|r| r.histogram.is_some()) {
        paths.extend(emit_figure_data(report, out_dir)?);
    }
    Ok(paths)
}

/// Fixed-width text table for standard output. Theory columns use four
/// decimals; sampled values keep ten.
pub fn render_table(report: &ExperimentReport) -> String {
    let gof = report.rows.iter().any(|r| r.gof.is_some());
    let mut s = String::new();
    let _ = write!(
        s,
        "{:>5}  {:>16}  {:>9}  {:>16}  {:>9}  {:>9}  {:>9}",
        "n", "mean (sampled)", "n/3", "var (sampled)", "n/18", "mean SE", "var rel"
    );
    if gof {
        let _ = write!(
            s,
            "  {:>9}  {:>9}  {:>9}",
            "KS exact", "KS normal", "KS 0.01"
        );
    }
    s.push('\n');
    for r in &report.rows {
        let _ = write!(
            s,
            "{:>5}  {:>16.10}  {:>9.4}  {:>16.10}  {:>9.4}  {:>+9.3}  {:>+9.4}",
            r.dim,
            r.empirical_mean,
            r.theoretical_mean,
            r.empirical_variance,
            r.theoretical_variance,
            r.mean_dev_se,
            r.var_dev_rel
        );
        if let Some(g) = &r.gof {
            let exact = g
                .ks_exact
                .map(|k| format!("{k:.5}"))
                .unwrap_or_else(|| "-".into());
            let _ = write!(
                s,
                "  {:>9}  {:>9.5}  {:>9.5}",
                exact, g.ks_normal, g.ks_critical_01
            );
        }
        s.push('\n');
    }
    let _ = writeln!(
        s,
        "seed {}, {} pairs per dimension, population variance",
        report.metadata.seed, report.metadata.num_pairs
    );
    s
}
