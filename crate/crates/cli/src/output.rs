//! Delimited text tables and their metadata sidecars.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const DELIMITER: char = ',';

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn render(&self, out: &mut String) {
        match self {
            // 17 significant digits round-trip every f64
            Cell::Float(x) => write!(out, "{x:.16e}").unwrap(),
            Cell::Int(n) => write!(out, "{n}").unwrap(),
            Cell::Text(s) => out.push_str(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Int(b as u64)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as u64)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(&DELIMITER.to_string()));
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(DELIMITER);
                }
                cell.render(&mut out);
            }
            out.push('\n');
        }
        out
    }
}

/// Run metadata written next to every output file.
#[derive(Clone, Debug, PartialEq)]
pub struct Sidecar {
    pub command: String,
    pub config_sha256: String,
    pub representation: Option<String>,
    pub seed: Option<u64>,
    pub rows: usize,
    pub columns: Vec<String>,
}

impl Sidecar {
    pub fn new(command: &str, config_bytes: &[u8], table: &Table) -> Self {
        Self {
            command: command.into(),
            config_sha256: format!("{:x}", Sha256::digest(config_bytes)),
            representation: None,
            seed: None,
            rows: table.rows.len(),
            columns: table.columns.clone(),
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "tool = \"wedge\"").unwrap();
        writeln!(out, "version = \"{}\"", env!("CARGO_PKG_VERSION")).unwrap();
        writeln!(out, "command = \"{}\"", self.command).unwrap();
        writeln!(out, "config_sha256 = \"{}\"", self.config_sha256).unwrap();
        if let Some(r) = &self.representation {
            writeln!(out, "representation = \"{r}\"").unwrap();
        }
        if let Some(s) = self.seed {
            writeln!(out, "seed = {s}").unwrap();
        }
        writeln!(out, "delimiter = \"{DELIMITER}\"").unwrap();
        writeln!(out, "rows = {}", self.rows).unwrap();
        let cols: Vec<String> = self.columns.iter().map(|c| format!("\"{c}\"")).collect();
        writeln!(out, "columns = [{}]", cols.join(", ")).unwrap();
        out
    }
}

/// `out.csv` → `out.csv.meta.toml`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.toml");
    PathBuf::from(s)
}

pub fn write_outputs(path: &Path, table: &Table, sidecar: &Sidecar) -> CliResult<()> {
    let write = |p: &Path, text: String| {
        std::fs::write(p, text).map_err(|e| CliError::Config(format!("cannot write {}: {e}", p.display())))
    };
    write(path, table.render())?;
    write(&sidecar_path(path), sidecar.render())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_through_the_text_form() {
        for x in [0.1, -1.0 / 3.0, 6.02214076e23, f64::MIN_POSITIVE, -0.0] {
            let mut s = String::new();
            Cell::Float(x).render(&mut s);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn table_has_header_and_rows() {
        let mut t = Table::new(["a", "b"]);
        t.push(vec![1.5.into(), true.into()]);
        assert_eq!(t.render(), "a,b\n1.5000000000000000e0,1\n");
    }

    #[test]
    fn sidecar_names_hash_and_version() {
        let t = Table::new(["x"]);
        let s = Sidecar::new("field-map", b"abc", &t).render();
        assert!(s.contains("ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"));
        assert!(s.contains(env!("CARGO_PKG_VERSION")));
    }
}
