//! Two-column CSV serialization of grid functions.
//!
//! The first line is a JSON object carrying the tail exponents (`null` for a
//! zero tail), followed by an `x,value` header and one row per sample with 12
//! significant digits; infinite values are written as `inf`.

use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::grid::{GridFunction, Tail};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    left_tail: Option<f64>,
    right_tail: Option<f64>,
}

fn tail_of(e: Option<f64>) -> Tail {
    e.map(Tail::Power).unwrap_or(Tail::Zero)
}

pub fn format_value(v: f64) -> String {
    if v.is_infinite() {
        "inf".to_string()
    } else {
        format!("{v:.11e}")
    }
}

pub fn to_csv_string(f: &GridFunction) -> String {
    let header = Header { left_tail: f.left_tail().exponent(), right_tail: f.right_tail().exponent() };
    let mut out = serde_json::to_string(&header).expect("header serializes");
    out.push('\n');
    out.push_str("x,value\n");
    for (x, y) in f.xs().iter().zip(f.ys()) {
        let _ = writeln!(out, "{},{}", format_value(*x), format_value(*y));
    }
    out
}

pub fn write_csv(f: &GridFunction, path: &Path) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(to_csv_string(f).as_bytes())?;
    Ok(())
}

fn parse_number(s: &str, line: usize) -> Result<f64> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("inf") {
        return Ok(f64::INFINITY);
    }
    s.parse::<f64>().map_err(|_| Error::Config(format!("line {line}: cannot parse number '{s}'")))
}

pub fn from_csv_reader(reader: impl BufRead) -> Result<GridFunction> {
    let mut lines = reader.lines().enumerate();
    let (_, first) = lines.next().ok_or_else(|| Error::Config("empty CSV".into()))?;
    let header: Header = serde_json::from_str(first?.trim())
        .map_err(|e| Error::Config(format!("line 1: bad JSON header: {e}")))?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (i, line) in lines {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with("x,") {
            continue;
        }
        let mut cols = line.split(',');
        let (Some(a), Some(b), None) = (cols.next(), cols.next(), cols.next()) else {
            return Err(Error::Config(format!("line {}: expected two columns", i + 1)));
        };
        xs.push(parse_number(a, i + 1)?);
        ys.push(parse_number(b, i + 1)?);
    }
    GridFunction::with_tails(xs, ys, tail_of(header.left_tail), tail_of(header.right_tail))
        .map_err(|e| Error::Config(e.to_string()))
}

pub fn read_csv(path: &Path) -> Result<GridFunction> {
    let file = std::fs::File::open(path)?;
    from_csv_reader(std::io::BufReader::new(file))
}
