//! CSV tables: comma separated, optional header row and label column,
//! plain decimal numbers.

use std::io::Write;
use std::path::Path;

use chi_audit_core::ContingencyTable;
use sha2::{Digest, Sha256};

use crate::error::{CliError, ParseError};

/// How to treat the first row and first column. `None` means auto-detect.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CsvLayout {
    pub header: Option<bool>,
    pub labels: Option<bool>,
}

/// A parsed table with the provenance needed by reports.
#[derive(Debug, Clone)]
pub struct LoadedTable {
    pub path: String,
    pub sha256: String,
    pub table: ContingencyTable,
}

/// Plain decimal: digits, one optional point, optional sign and exponent.
/// No thousands separators, no `inf`/`nan`.
fn parse_decimal(cell: &str) -> Option<f64> {
    if cell.is_empty() || !cell.bytes().all(|b| b.is_ascii_digit() || b"+-.eE".contains(&b)) {
        return None;
    }
    cell.parse::<f64>().ok().filter(|v| v.is_finite())
}

pub fn read_table(path: &Path, layout: CsvLayout) -> Result<LoadedTable, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    parse_table(&bytes, &path.display().to_string(), layout)
}

pub fn parse_table(bytes: &[u8], path: &str, layout: CsvLayout) -> Result<LoadedTable, CliError> {
    let sha256 = hex::encode(Sha256::digest(bytes));
    let mut reader =
        csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(bytes);

    let mut records: Vec<(u64, Vec<String>)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            ParseError { path: path.to_owned(), line, column: 0, value: String::new(), reason: "malformed CSV record" }
        })?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let line = record.position().map_or(0, |p| p.line());
        records.push((line, record.iter().map(str::to_owned).collect()));
    }
    if records.is_empty() {
        return Err(ParseError {
            path: path.to_owned(),
            line: 1,
            column: 1,
            value: String::new(),
            reason: "empty input",
        }
        .into());
    }

    let has_header = layout.header.unwrap_or_else(|| records[0].1.iter().skip(1).all(|c| parse_decimal(c).is_none()));
    let header = if has_header { Some(records.remove(0).1) } else { None };
    let has_labels = layout.labels.unwrap_or_else(|| {
        !records.is_empty() && records.iter().all(|(_, r)| r.first().is_some_and(|c| parse_decimal(c).is_none()))
    });
    let skip = usize::from(has_labels);

    let mut rows = Vec::with_capacity(records.len());
    let mut row_labels = Vec::new();
    for (line, record) in &records {
        if has_labels {
            row_labels.push(record.first().cloned().unwrap_or_default());
        }
        let mut row = Vec::with_capacity(record.len().saturating_sub(skip));
        for (j, cell) in record.iter().enumerate().skip(skip) {
            let value = parse_decimal(cell).ok_or_else(|| ParseError {
                path: path.to_owned(),
                line: *line,
                column: j + 1,
                value: cell.clone(),
                reason: "not a plain decimal number",
            })?;
            row.push(value);
        }
        rows.push(row);
    }

    let col_labels = header.map(|h| h.into_iter().skip(skip).collect::<Vec<_>>());
    let table = ContingencyTable::from_rows(&rows)
        .and_then(|t| t.with_labels(has_labels.then_some(row_labels), col_labels))
        .map_err(|e| CliError::core(path, e))?;
    Ok(LoadedTable { path: path.to_owned(), sha256, table })
}

/// Writes `table` as CSV, with a header row and label column when the
/// table carries labels.
pub fn write_table<W: Write>(table: &ContingencyTable, out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let row_labels = table.row_labels();
    let to_err = |e: csv::Error| CliError::Output(e.into());
    if let Some(cols) = table.col_labels() {
        let mut header: Vec<&str> = Vec::new();
        if row_labels.is_some() {
            header.push("");
        }
        header.extend(cols.iter().map(String::as_str));
        w.write_record(&header).map_err(to_err)?;
    }
    for i in 0..table.rows() {
        let mut record: Vec<String> = Vec::new();
        if let Some(labels) = row_labels {
            record.push(labels[i].clone());
        }
        record.extend(table.observed().row(i).iter().map(|v| v.to_string()));
        w.write_record(&record).map_err(to_err)?;
    }
    w.flush().map_err(CliError::Output)
}
