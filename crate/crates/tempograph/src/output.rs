//! Evolution tables as CSV or JSON.

use std::io::{self, Write};

use serde::Serialize;
use tempograph_core::estimation::{EstimateReport, RNG_ALGORITHM};
use tempograph_core::timeline::EvolutionSeries;

pub const CSV_HEADER: [&str; 10] =
    ["metric", "era", "v_count", "e_count", "mean", "ci_low", "ci_high", "n_samples", "converged", "param"];

/// Shortest round-trip decimal, always with a fractional part or exponent.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

/// One flattened evolution row: a report, or the failure of an entry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row<'a> {
    pub metric: &'a str,
    pub strategy: &'a str,
    /// Era label, the snapshot's time point.
    pub era: &'a str,
    pub v_count: usize,
    pub e_count: usize,
    #[serde(flatten)]
    pub report: Option<&'a EstimateReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub fn rows(series: &[EvolutionSeries]) -> Vec<Row<'_>> {
    let mut out = Vec::new();
    for s in series {
        for e in &s.entries {
            let base = Row {
                metric: s.metric.as_str(),
                strategy: s.strategy.as_str(),
                era: &e.era,
                v_count: e.v_count,
                e_count: e.e_count,
                report: None,
                error: None,
            };
            match &e.outcome {
                Ok(reports) => out.extend(reports.iter().map(|r| Row { report: Some(r), ..base.clone() })),
                Err(err) => out.push(Row { error: Some(err.to_string()), ..base }),
            }
        }
    }
    out
}

fn csv_record(r: &Row<'_>) -> Vec<String> {
    let head = [r.metric.to_string(), r.era.to_string(), r.v_count.to_string(), r.e_count.to_string()];
    let tail = match (r.report, &r.error) {
        (Some(rep), _) => [
            fmt_f64(rep.mean),
            fmt_f64(rep.ci_low),
            fmt_f64(rep.ci_high),
            rep.n_samples.to_string(),
            rep.converged.to_string(),
            rep.param.map(|p| p.to_string()).unwrap_or_default(),
        ],
        (None, err) => [
            String::new(),
            String::new(),
            String::new(),
            "0".into(),
            "false".into(),
            format!("error:{}", err.as_deref().unwrap_or("unknown")),
        ],
    };
    head.into_iter().chain(tail).collect()
}

pub fn write_csv<W: Write>(w: W, series: &[EvolutionSeries]) -> io::Result<()> {
    let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    out.write_record(CSV_HEADER)?;
    for r in rows(series) {
        out.write_record(csv_record(&r))?;
    }
    out.flush()
}

#[derive(Serialize)]
struct Document<'a> {
    rng: &'static str,
    seed: u64,
    rows: Vec<Row<'a>>,
}

pub fn write_json<W: Write>(mut w: W, series: &[EvolutionSeries], seed: u64) -> io::Result<()> {
    let doc = Document { rng: RNG_ALGORITHM, seed, rows: rows(series) };
    serde_json::to_writer_pretty(&mut w, &doc)?;
    w.write_all(b"\n")?;
    w.flush()
}
