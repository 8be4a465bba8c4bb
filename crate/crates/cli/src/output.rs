//! CSV emission and read-back, plus the generated plot script.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::CliError;

/// 17 significant digits, so values read back exactly.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// One CSV cell.
pub enum Cell {
    Int(usize),
    Real(f64),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

#[derive(Debug, Default)]
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Self { text }
    }

    pub fn row<I: IntoIterator<Item = Cell>>(&mut self, cells: I) {
        let mut first = true;
        for cell in cells {
            if !first {
                self.text.push(',');
            }
            first = false;
            match cell {
                Cell::Int(v) => write!(self.text, "{v}").unwrap(),
                Cell::Real(v) => self.text.push_str(&fmt_f64(v)),
            }
        }
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        write_file(path, &self.text)
    }
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Numeric CSV: header names and rows of values.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

pub fn parse_csv(text: &str) -> Result<Table, String> {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or("empty file")?
        .split(',')
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|c| c.parse::<f64>().map_err(|_| format!("line {}: bad number `{c}`", i + 2)))
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != header.len() {
            return Err(format!("line {}: expected {} fields", i + 2, header.len()));
        }
        rows.push(row);
    }
    Ok(Table { header, rows })
}

pub fn read_csv(path: &Path) -> Result<Table, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    parse_csv(&text).map_err(|reason| CliError::Parse { path: path.to_path_buf(), reason })
}

/// Matplotlib script drawing `rho_n(t)` from `populations.csv` as a heatmap.
pub fn plot_script(title: &str) -> String {
    format!(
        r#"#!/usr/bin/env python3
# Heatmap of rho_n(t) from populations.csv (columns t,n,rho).
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

here = os.path.dirname(os.path.abspath(__file__))
data = np.loadtxt(os.path.join(here, "populations.csv"), delimiter=",", skiprows=1)
t = np.unique(data[:, 0])
levels = int(data[:, 1].max()) + 1
rho = np.zeros((levels, t.size))
rho[data[:, 1].astype(int), np.searchsorted(t, data[:, 0])] = data[:, 2]

fig, ax = plt.subplots(figsize=(7, 4.5))
mesh = ax.pcolormesh(t, np.arange(levels), rho, shading="nearest", cmap="viridis")
fig.colorbar(mesh, ax=ax, label=r"$\rho_n(t)$")
ax.set_xlabel("t")
ax.set_ylabel("n")
ax.set_title("{title}")
fig.tight_layout()
out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "populations.png")
fig.savefig(out, dpi=150)
"#
    )
}
