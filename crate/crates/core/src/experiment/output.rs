// Copyright 2026 The coinwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! CSV tables and run records.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Result, WalkError};

use super::config::ExperimentConfig;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn render(&self, out: &mut String) {
        use std::fmt::Write as _;
        match self {
            // 17 significant digits round-trip every f64
            Cell::Real(x) if x.is_finite() => write!(out, "{x:.16e}").unwrap(),
            Cell::Real(x) if x.is_nan() => out.push_str("nan"),
            Cell::Real(x) => out.push_str(if *x > 0.0 { "inf" } else { "-inf" }),
            Cell::Int(i) => write!(out, "{i}").unwrap(),
            Cell::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Cell::Text(s) => out.push_str(s),
        }
    }

    pub fn as_real(&self) -> Option<f64> {
        match self {
            Cell::Real(x) => Some(*x),
            Cell::Int(i) => Some(*i as f64),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<i64> for Cell {
    fn from(i: i64) -> Self {
        Cell::Int(i)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[k]).collect())
    }

    /// CSV text with a leading `#` metadata line.
    pub fn to_csv(&self, config: &ExperimentConfig, label: &str) -> String {
        let mut s = format!(
            "# coinwalk {VERSION} {label} config_sha256={} seed={}\n",
            config.digest(),
            config.seed
        );
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            for (k, cell) in row.iter().enumerate() {
                if k > 0 {
                    s.push(',');
                }
                cell.render(&mut s);
            }
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputDigest {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

/// Record of one invocation: config, outputs and headline numbers.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: ExperimentConfig,
    pub config_sha256: String,
    pub wall_clock_seconds: f64,
    pub outputs: Vec<OutputDigest>,
    /// Derived headline numbers (optimal rates, fits, peak times).
    pub summary: serde_json::Value,
    pub warnings: Vec<String>,
}

impl RunRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

pub fn digest_bytes(path: &str, bytes: &[u8]) -> OutputDigest {
    OutputDigest {
        path: path.to_string(),
        bytes: bytes.len(),
        sha256: hex::encode(Sha256::digest(bytes)),
    }
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, text: &str) -> Result<OutputDigest> {
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| WalkError::io(p.display().to_string(), e))?;
            Ok(digest_bytes(&p.display().to_string(), text.as_bytes()))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| WalkError::io("<stdout>", e))?;
            Ok(digest_bytes("-", text.as_bytes()))
        }
    }
}

/// `<out>.run.json` next to the CSV.
pub fn record_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_os_string();
    s.push(".run.json");
    PathBuf::from(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells_render_with_17_digits() {
        let mut s = String::new();
        Cell::Real(0.1).render(&mut s);
        assert_eq!(s, "1.0000000000000001e-1");
        assert_eq!(s.parse::<f64>().unwrap(), 0.1);
        let mut s = String::new();
        Cell::Real(1.0 / 3.0).render(&mut s);
        assert_eq!(s.parse::<f64>().unwrap(), 1.0 / 3.0);
        let mut s = String::new();
        Cell::Real(f64::NAN).render(&mut s);
        Cell::Int(-4).render(&mut s);
        Cell::Bool(false).render(&mut s);
        assert_eq!(s, "nan-4false");
    }

    #[test]
    fn record_path_appends_suffix() {
        assert_eq!(
            record_path(Path::new("a/b.csv")),
            PathBuf::from("a/b.csv.run.json")
        );
    }
}
