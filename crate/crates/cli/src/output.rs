//! CSV and JSON writers shared by the subcommands.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::args::{Common, Format};
use crate::error::CliResult;

/// 17 significant digits, enough to round-trip any double.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Everything that determines the output of a run.
#[derive(Debug, Serialize)]
pub struct RunConfig<'a, P: Serialize> {
    pub command: &'static str,
    pub common: &'a Common,
    pub params: &'a P,
}

#[derive(Debug, Default, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// What a subcommand produced: a full JSON report, the same data as a table
/// and a short verdict written next to the table in CSV mode.
pub struct Output<R: Serialize, V: Serialize> {
    pub report: R,
    pub table: Table,
    pub verdict: V,
    pub passed: bool,
}

fn sink(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_json<T: Serialize>(out: Option<&Path>, value: &T) -> CliResult<()> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn write_csv(out: Option<&Path>, table: &Table) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(sink(out)?);
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// `<out>.verdict.json`.
pub fn verdict_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".verdict.json");
    PathBuf::from(name)
}

pub fn emit<R: Serialize, V: Serialize>(common: &Common, default: Format, output: &Output<R, V>) -> CliResult<bool> {
    let out = common.out.as_deref();
    match common.format.unwrap_or(default) {
        Format::Json => write_json(out, &output.report)?,
        Format::Csv => {
            write_csv(out, &output.table)?;
            match out {
                Some(path) => write_json(Some(&verdict_path(path)), &output.verdict)?,
                None => eprintln!("{}", serde_json::to_string(&output.verdict)?),
            }
        }
    }
    Ok(output.passed)
}
