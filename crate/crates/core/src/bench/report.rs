use super::profile::{geometric_mean, ProfileRow, ResultTable, StatsError};
use super::run::{BenchRecord, Summary};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use thiserror::Error;

pub const RECORD_HEADER: [&str; 4] = ["op_index", "kind", "elapsed_ns", "size"];
pub const SUMMARY_HEADER: [&str; 9] = [
    "instance",
    "algorithm",
    "repetition",
    "n",
    "ops",
    "total_ns",
    "final_size",
    "opt",
    "quality",
];
pub const PROFILE_HEADER: [&str; 3] = ["tau", "algorithm", "fraction"];

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("summary header must be {expected:?}, found {found:?}")]
    Header {
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error(transparent)]
    Stats(#[from] StatsError),
}

/// One line of a summary CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub instance: String,
    pub algorithm: String,
    pub repetition: u32,
    pub n: usize,
    pub ops: usize,
    pub total_ns: u64,
    pub final_size: usize,
    pub opt: Option<usize>,
    pub quality: Option<f64>,
}

impl SummaryRow {
    pub fn new(instance: &str, s: &Summary) -> Self {
        Self {
            instance: instance.to_string(),
            algorithm: s.algorithm.clone(),
            repetition: s.repetition,
            n: s.n,
            ops: s.ops,
            total_ns: s.total_ns,
            final_size: s.final_size,
            opt: s.opt,
            quality: s.quality,
        }
    }
}

fn write_csv<T: Serialize>(header: &[&str], rows: impl IntoIterator<Item = T>) -> String {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(header).expect("write to memory");
    for row in rows {
        w.serialize(row).expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf-8")
}

pub fn records_to_csv(records: &[BenchRecord]) -> String {
    write_csv(&RECORD_HEADER, records)
}

pub fn summaries_to_csv(rows: &[SummaryRow]) -> String {
    write_csv(&SUMMARY_HEADER, rows)
}

/// Long format: one line per (tau, algorithm), in row order.
pub fn profile_to_csv(algorithms: &[String], rows: &[ProfileRow]) -> String {
    write_csv(
        &PROFILE_HEADER,
        rows.iter().flat_map(|r| {
            algorithms
                .iter()
                .zip(&r.fractions)
                .map(move |(a, f)| (r.tau, a.as_str(), *f))
        }),
    )
}

pub fn parse_summaries_csv(text: &str) -> Result<Vec<SummaryRow>, ReportError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let found: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if found != SUMMARY_HEADER {
        return Err(ReportError::Header {
            expected: SUMMARY_HEADER.iter().map(|s| s.to_string()).collect(),
            found,
        });
    }
    r.deserialize().map(|row| row.map_err(ReportError::from)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    Quality,
    Time,
}

/// Aggregates repetitions by geometric mean into an instance × algorithm
/// table. Labels keep their order of first appearance; a pair without rows
/// or without a quality value becomes a missing cell.
pub fn table_from_summaries(
    rows: &[SummaryRow],
    objective: Objective,
) -> Result<ResultTable, ReportError> {
    let mut instances: Vec<String> = Vec::new();
    let mut algorithms: Vec<String> = Vec::new();
    for r in rows {
        if !instances.contains(&r.instance) {
            instances.push(r.instance.clone());
        }
        if !algorithms.contains(&r.algorithm) {
            algorithms.push(r.algorithm.clone());
        }
    }
    let mut values = vec![vec![None; algorithms.len()]; instances.len()];
    for (i, inst) in instances.iter().enumerate() {
        for (a, alg) in algorithms.iter().enumerate() {
            let vals: Option<Vec<f64>> = rows
                .iter()
                .filter(|r| &r.instance == inst && &r.algorithm == alg)
                .map(|r| match objective {
                    Objective::Quality => r.quality,
                    Objective::Time => Some(r.total_ns as f64),
                })
                .collect();
            if let Some(v) = vals.filter(|v| !v.is_empty()) {
                values[i][a] = Some(geometric_mean(&v)?);
            }
        }
    }
    Ok(ResultTable {
        algorithms,
        instances,
        values,
    })
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Step plot of a profile, tau decreasing from left to right, one polyline
/// per algorithm.
pub fn profile_svg(title: &str, algorithms: &[String], rows: &[ProfileRow]) -> String {
    let (w, h) = (640.0, 400.0);
    let (left, right, top, bottom) = (60.0, 170.0, 40.0, 50.0);
    let pw = w - left - right;
    let ph = h - top - bottom;
    let tau_max = rows.iter().map(|r| r.tau).fold(f64::NEG_INFINITY, f64::max);
    let tau_min = rows.iter().map(|r| r.tau).fold(f64::INFINITY, f64::min);
    let span = if tau_max > tau_min { tau_max - tau_min } else { 1.0 };
    let x = |tau: f64| left + (tau_max - tau) / span * pw;
    let y = |f: f64| top + (1.0 - f) * ph;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
        left + pw / 2.0,
        escape(title)
    )
    .unwrap();
    writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    )
    .unwrap();
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{f:.2}</text>"#,
            left - 6.0,
            y(f) + 4.0
        )
        .unwrap();
    }
    if !rows.is_empty() {
        for tau in [tau_max, tau_min] {
            writeln!(
                s,
                r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{tau:.3}</text>"#,
                x(tau),
                top + ph + 16.0
            )
            .unwrap();
        }
    }
    writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">tau</text>"#,
        left + pw / 2.0,
        h - 12.0
    )
    .unwrap();
    for (a, name) in algorithms.iter().enumerate() {
        let color = PALETTE[a % PALETTE.len()];
        let mut pts = String::new();
        for (i, r) in rows.iter().enumerate() {
            let f = r.fractions[a];
            if i > 0 {
                write!(pts, "{:.2},{:.2} ", x(r.tau), y(rows[i - 1].fractions[a])).unwrap();
            }
            write!(pts, "{:.2},{:.2} ", x(r.tau), y(f)).unwrap();
        }
        writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            pts.trim_end()
        )
        .unwrap();
        let ly = top + 14.0 + 18.0 * a as f64;
        writeln!(
            s,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            w - right + 12.0,
            w - right + 32.0
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11">{}</text>"#,
            w - right + 38.0,
            ly + 4.0,
            escape(name)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
