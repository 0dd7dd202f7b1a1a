//! Report envelopes and output formats.

use std::collections::BTreeMap;
use std::io::Write;

use serde_json::{json, Value};

use crate::error::CliError;

pub const VERSION: &str = env!("SLAG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A rectangular table for CSV output.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// Result of one command: the JSON document, an optional table and whether every
/// check passed.
#[derive(Debug, Clone)]
pub struct Output {
    pub report: Value,
    pub table: Option<Table>,
    pub passed: bool,
}

/// Wraps a command body with the version, seed and tolerance set.
pub fn envelope(
    command: &str,
    seed: u64,
    tolerances: &BTreeMap<&str, f64>,
    passed: bool,
    body: Value,
) -> Value {
    json!({
        "command": command,
        "version": VERSION,
        "seed": seed,
        "tolerances": tolerances,
        "passed": passed,
        "result": body,
    })
}

/// Writes JSON (keys sorted, two-space indent, trailing newline) or CSV.
pub fn write_output(out: &Output, format: Format, w: &mut dyn Write) -> Result<(), CliError> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, &out.report)?;
            writeln!(w)?;
        }
        Format::Csv => {
            let table = out.table.as_ref().ok_or_else(|| {
                CliError::Usage("csv output is only available for tabular commands".into())
            })?;
            let mut wr = csv::Writer::from_writer(w);
            wr.write_record(&table.header)?;
            for row in &table.rows {
                wr.write_record(row)?;
            }
            wr.flush()?;
        }
    }
    Ok(())
}

/// Fixed-precision float formatting for tables.
pub fn fmt(v: f64) -> String {
    format!("{v:.17e}")
}
