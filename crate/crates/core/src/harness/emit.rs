use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{AggregateReport, RunRow};
use crate::driver::csv_err;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidParameter(format!("unknown format {other:?}, expected csv or json"))),
        }
    }
}

const FIXED_COLUMNS: [&str; 17] = [
    "T",
    "replication",
    "seed",
    "cumulative_reward",
    "raw_cumulative_reward",
    "opt_gamma",
    "alpha",
    "adversarial_gap",
    "opt_lp",
    "stochastic_gap",
    "max_multiplier",
    "multiplier_bound",
    "fallback_rounds",
    "tau",
    "min_budget",
    "primal_restarts",
    "warnings",
];

pub fn rows_csv_header(resources: usize) -> Vec<String> {
    let mut header: Vec<String> = FIXED_COLUMNS.iter().map(|s| s.to_string()).collect();
    header.extend((1..=resources).map(|i| format!("final_budget_{i}")));
    header
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn write_rows_csv<W: Write>(report: &AggregateReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(rows_csv_header(report.resources)).map_err(csv_err)?;
    for r in &report.rows {
        let mut rec = vec![
            r.horizon.to_string(),
            r.replication.to_string(),
            r.seed.to_string(),
            r.cumulative_reward.to_string(),
            r.raw_cumulative_reward.to_string(),
            r.opt_gamma.to_string(),
            opt(r.alpha),
            opt(r.adversarial_gap),
            opt(r.opt_lp),
            opt(r.stochastic_gap),
            r.max_multiplier.to_string(),
            opt(r.multiplier_bound),
            r.fallback_rounds.to_string(),
            opt(r.tau),
            r.min_budget.to_string(),
            r.primal_restarts.to_string(),
            r.warnings.to_string(),
        ];
        rec.extend(r.final_budget.iter().map(f64::to_string));
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `report` to any sink. JSON is `{config, resources, rows, summaries}`.
pub fn emit_to<W: Write>(report: &AggregateReport, format: Format, mut out: W) -> Result<()> {
    match format {
        Format::Csv => write_rows_csv(report, out),
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, report)?;
            out.write_all(b"\n")?;
            out.flush()?;
            Ok(())
        }
    }
}

pub fn emit(report: &AggregateReport, format: Format, path: impl AsRef<Path>) -> Result<()> {
    emit_to(report, format, BufWriter::new(File::create(path)?))
}

fn parse<T: FromStr>(field: &str, column: &str) -> Result<T> {
    field.parse().map_err(|_| Error::InvalidParameter(format!("bad value {field:?} in column {column}")))
}

fn parse_opt<T: FromStr>(field: &str, column: &str) -> Result<Option<T>> {
    if field.is_empty() {
        Ok(None)
    } else {
        parse(field, column).map(Some)
    }
}

/// Parses rows written by [`emit`] in CSV format.
pub fn read_rows_csv<R: Read>(input: R) -> Result<Vec<RunRow>> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader.headers().map_err(csv_err)?.clone();
    let resources = header.len().checked_sub(FIXED_COLUMNS.len()).ok_or_else(|| {
        Error::InvalidParameter(format!("expected at least {} columns", FIXED_COLUMNS.len()))
    })?;
    if rows_csv_header(resources).iter().map(String::as_str).ne(header.iter()) {
        return Err(Error::InvalidParameter("unexpected report header".into()));
    }
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(csv_err)?;
        let f = |i: usize| (&rec[i], FIXED_COLUMNS[i]);
        let get = |i: usize| -> Result<f64> { parse(f(i).0, f(i).1) };
        let get_opt = |i: usize| -> Result<Option<f64>> { parse_opt(f(i).0, f(i).1) };
        rows.push(RunRow {
            horizon: parse(f(0).0, f(0).1)?,
            replication: parse(f(1).0, f(1).1)?,
            seed: parse(f(2).0, f(2).1)?,
            cumulative_reward: get(3)?,
            raw_cumulative_reward: get(4)?,
            opt_gamma: get(5)?,
            alpha: get_opt(6)?,
            adversarial_gap: get_opt(7)?,
            opt_lp: get_opt(8)?,
            stochastic_gap: get_opt(9)?,
            max_multiplier: get(10)?,
            multiplier_bound: get_opt(11)?,
            fallback_rounds: parse(f(12).0, f(12).1)?,
            tau: parse_opt(f(13).0, f(13).1)?,
            min_budget: get(14)?,
            primal_restarts: parse(f(15).0, f(15).1)?,
            warnings: parse(f(16).0, f(16).1)?,
            final_budget: (0..resources)
                .map(|i| parse(&rec[FIXED_COLUMNS.len() + i], "final_budget"))
                .collect::<Result<_>>()?,
        });
    }
    Ok(rows)
}
