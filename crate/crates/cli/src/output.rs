//! CSV and sidecar emission: 12 significant digits, LF endings, atomic
//! rename into place.

use crate::config::Sidecar;
use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

/// One CSV cell: a number (formatted with 12 significant digits) or a label.
#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:.11e}"),
            Cell::Text(s) => s.clone(),
        }
    }

    fn is_finite(&self) -> bool {
        match self {
            Cell::Num(v) => v.is_finite(),
            Cell::Text(_) => true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    /// Reject NaN/Inf cells and ragged rows before anything is written.
    pub fn check(&self) -> Result<(), String> {
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.header.len() {
                return Err(format!(
                    "row {i} has {} cells, header has {}",
                    row.len(),
                    self.header.len()
                ));
            }
            for (cell, name) in row.iter().zip(self.header.iter()) {
                if !cell.is_finite() {
                    return Err(format!("non-finite value in column '{name}' at row {i}"));
                }
            }
        }
        Ok(())
    }

    fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let mut first = true;
            for cell in row {
                if !first {
                    out.push(',');
                }
                let _ = write!(out, "{}", cell.render());
                first = false;
            }
            out.push('\n');
        }
        out
    }
}

fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let tmp: PathBuf = {
        let mut os = path.as_os_str().to_owned();
        os.push(".tmp");
        os.into()
    };
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)
}

pub fn write_csv(path: &Path, table: &Table) -> io::Result<()> {
    write_atomic(path, &table.render())
}

/// The sidecar lands next to the CSV as `<out>.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut os = out.as_os_str().to_owned();
    os.push(".json");
    os.into()
}

pub fn write_sidecar(out: &Path, sidecar: &Sidecar) -> io::Result<()> {
    let mut body = serde_json::to_string_pretty(sidecar).expect("sidecar serializes");
    body.push('\n');
    write_atomic(&sidecar_path(out), &body)
}
