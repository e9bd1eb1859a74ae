use std::io::Write;
use std::process::ExitCode;

use clap::ValueEnum;
use qgw::{Mat, Scalar};
use serde_json::{Map, Value};

pub const SCHEMA: &str = "qgw/1";

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// The result of one command. `ok == false` means a check failed (exit 1).
pub struct Report {
    pub command: &'static str,
    pub ok: bool,
    pub value: Value,
    pub pretty: String,
    pub csv: Option<Vec<Vec<String>>>,
    pub failure: Option<&'static str>,
}

impl Report {
    pub fn ok(value: Value, pretty: String) -> Self {
        Report { command: "", ok: true, value, pretty, csv: None, failure: None }
    }

    pub fn check(ok: bool, value: Value, pretty: String, failure: &'static str) -> Self {
        Report { ok, failure: (!ok).then_some(failure), ..Report::ok(value, pretty) }
    }

    pub fn with_csv(mut self, rows: Vec<Vec<String>>) -> Self {
        self.csv = Some(rows);
        self
    }

    pub fn named(mut self, command: &'static str) -> Self {
        self.command = command;
        self
    }

    pub fn emit(self, format: Format) -> ExitCode {
        match format {
            Format::Json => {
                let mut obj = Map::new();
                obj.insert("schema".into(), SCHEMA.into());
                obj.insert("command".into(), self.command.into());
                obj.insert("ok".into(), self.ok.into());
                obj.insert("result".into(), self.value);
                out(&serde_json::to_string_pretty(&Value::Object(obj)).unwrap());
            }
            Format::Csv => match &self.csv {
                Some(rows) => {
                    let mut w = csv::Writer::from_writer(std::io::stdout());
                    // A closed pipe is not an error for a batch tool.
                    let _ = rows.iter().try_for_each(|r| w.write_record(r)).and_then(|_| w.flush().map_err(Into::into));
                }
                None => {
                    eprintln!("error: --output csv is not available for {}", self.command);
                    return ExitCode::from(2);
                }
            },
            Format::Pretty => out(&self.pretty),
        }
        match self.failure {
            None => ExitCode::SUCCESS,
            Some(msg) => {
                eprintln!("check failed: {msg}");
                ExitCode::from(1)
            }
        }
    }
}

fn out(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

pub fn pretty_complex(z: num_complex::Complex64) -> String {
    format!("{:.12e} {:+.12e}i", z.re, z.im)
}

pub fn pretty_mat<F: Scalar>(m: &Mat<F>) -> String {
    let cells: Vec<Vec<String>> = (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)].to_pretty()).collect()).collect();
    let width = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(0);
    cells.iter().map(|r| format!("[ {} ]", r.iter().map(|c| format!("{c:>width$}")).collect::<Vec<_>>().join("  "))).collect::<Vec<_>>().join("\n")
}
