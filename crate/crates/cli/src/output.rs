//! CSV and JSON export of result tables.
//!
//! CSV carries the metadata as `#`-prefixed comment lines above the
//! `omega_rad_s,re,im` header; numbers are printed with 17 significant
//! digits so a re-parse reproduces every f64 bit-exactly. JSON holds the
//! same content as `{ "meta": ..., "rows": [[omega, re, im], ...] }`.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::scenario::{ResultTable, TableMeta};
use crate::{Error, Result};

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

/// Renders the CSV document as a string.
pub fn to_csv(table: &ResultTable) -> String {
    let mut out = String::new();
    out.push_str(&format!("# scenario: {}\n", table.meta.scenario));
    out.push_str(&format!("# param_hash: {}\n", table.meta.param_hash));
    out.push_str(&format!("# value: {}\n", table.meta.value));
    out.push_str(&format!("# code_version: {}\n", table.meta.code_version));
    out.push_str("omega_rad_s,re,im\n");
    for (w, re, im) in &table.rows {
        out.push_str(&format!("{w:.16e},{re:.16e},{im:.16e}\n"));
    }
    out
}

pub fn write_csv(table: &ResultTable, path: &Path) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| io_err(path, e))?;
    f.write_all(to_csv(table).as_bytes()).map_err(|e| io_err(path, e))
}

pub fn write_json(table: &ResultTable, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(table)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    fs::write(path, text).map_err(|e| io_err(path, e))
}

/// Parses a CSV document produced by [`to_csv`].
pub fn parse_csv(text: &str) -> Result<ResultTable> {
    let mut meta = TableMeta {
        scenario: String::new(),
        param_hash: String::new(),
        value: String::new(),
        code_version: String::new(),
    };
    let mut rows = Vec::new();
    let mut header_seen = false;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some((key, value)) = comment.split_once(':') {
                let value = value.trim().to_string();
                match key.trim() {
                    "scenario" => meta.scenario = value,
                    "param_hash" => meta.param_hash = value,
                    "value" => meta.value = value,
                    "code_version" => meta.code_version = value,
                    _ => {}
                }
            }
            continue;
        }
        if !header_seen {
            if line != "omega_rad_s,re,im" {
                return Err(Error::Io(format!(
                    "line {}: expected header 'omega_rad_s,re,im', got '{line}'",
                    lineno + 1
                )));
            }
            header_seen = true;
            continue;
        }
        let mut cols = line.split(',');
        let mut next = |name: &str| -> Result<f64> {
            cols.next()
                .ok_or_else(|| Error::Io(format!("line {}: missing column {name}", lineno + 1)))?
                .parse::<f64>()
                .map_err(|e| Error::Io(format!("line {}: {name}: {e}", lineno + 1)))
        };
        let row = (next("omega_rad_s")?, next("re")?, next("im")?);
        rows.push(row);
    }
    if !header_seen {
        return Err(Error::Io("CSV document has no header line".to_string()));
    }
    Ok(ResultTable { meta, rows })
}

pub fn read_csv(path: &Path) -> Result<ResultTable> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_csv(&text)
}

pub fn read_json(path: &Path) -> Result<ResultTable> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
