//! Edge-list files, dataset manifests and CSV formatting.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use percothresh_core::graph::{parse_edge_list, Graph, LabeledGraph};
use percothresh_core::percolation::PercolationCurve;

use crate::error::CliError;

/// Output schema version, written into every CSV and JSON file.
pub const SCHEMA_VERSION: u32 = 1;

pub fn schema_line(kind: &str) -> String {
    format!("# percothresh {kind} schema {SCHEMA_VERSION}\n")
}

pub fn read_edge_list(path: &Path) -> Result<LabeledGraph, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_edge_list(&text).map_err(|source| CliError::Input { path: path.to_path_buf(), source })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn write_edge_list(path: &Path, g: &Graph) -> Result<(), CliError> {
    write_text(path, &g.to_edge_list())
}

/// Network name to edge-list file. One `name file` pair per line, `%` or `#`
/// comments; relative files resolve against the manifest's directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub entries: Vec<(String, PathBuf)>,
}

impl Manifest {
    pub fn parse(text: &str, base: &Path) -> Result<Self, String> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('%') || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            match (it.next(), it.next()) {
                (Some(name), Some(file)) => entries.push((name.to_string(), base.join(file))),
                _ => return Err(format!("line {}: expected `name file`", i + 1)),
            }
        }
        Ok(Manifest { entries })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Manifest::parse(&text, base).map_err(|m| CliError::Usage(format!("{}: {m}", path.display())))
    }
}

/// At most 12 significant digits, shortest form.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

/// `p,s1,s2` curve table.
pub fn curve_csv(curve: &PercolationCurve) -> String {
    let mut out = schema_line("curve");
    out.push_str("p,s1,s2\n");
    for ((p, s1), s2) in curve.p_grid.iter().zip(&curve.s1).zip(&curve.s2) {
        let _ = writeln!(out, "{},{},{}", sig12(*p), sig12(*s1), sig12(*s2));
    }
    out
}
