//! CSV and JSON rendering. Floats are written in shortest round-trip form so
//! identical runs give identical bytes.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::config::Format;
use super::suites::{Record, Status};
use crate::C64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub construction: &'static str,
    #[serde(rename = "D")]
    pub dim: usize,
    pub param: String,
    pub index: usize,
    pub eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolRow {
    #[serde(rename = "J")]
    pub j: f64,
    pub gamma_or_phi: f64,
    pub re: f64,
    pub im: f64,
}

impl SymbolRow {
    pub fn new(j: f64, angle: f64, value: C64) -> Self {
        Self {
            j,
            gamma_or_phi: angle,
            re: value.re,
            im: value.im,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommutatorRow {
    pub construction: &'static str,
    #[serde(rename = "D")]
    pub dim: usize,
    pub param: String,
    pub window: usize,
    pub defect: f64,
}

fn json<T: Serialize>(rows: &[T]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}

pub fn render_spectrum(rows: &[SpectrumRow], format: Format) -> String {
    match format {
        Format::Json => json(rows),
        Format::Csv => {
            let mut s = String::from("construction,D,param,index,eigenvalue\n");
            for r in rows {
                s += &format!(
                    "{},{},{},{},{:?}\n",
                    r.construction, r.dim, r.param, r.index, r.eigenvalue
                );
            }
            s
        }
    }
}

pub fn render_symbols(rows: &[SymbolRow], format: Format) -> String {
    match format {
        Format::Json => json(rows),
        Format::Csv => {
            let mut s = String::from("J,gamma_or_phi,re,im\n");
            for r in rows {
                s += &format!("{:?},{:?},{:?},{:?}\n", r.j, r.gamma_or_phi, r.re, r.im);
            }
            s
        }
    }
}

pub fn render_commutators(rows: &[CommutatorRow], format: Format) -> String {
    match format {
        Format::Json => json(rows),
        Format::Csv => {
            let mut s = String::from("construction,D,param,window,defect\n");
            for r in rows {
                s += &format!("{},{},{},{},{:?}\n", r.construction, r.dim, r.param, r.window, r.defect);
            }
            s
        }
    }
}

pub fn render_report(records: &[Record]) -> String {
    json(records)
}

pub fn render_check_lines(records: &[Record]) -> String {
    let mut s = String::new();
    for r in records {
        let tag = match r.status {
            Status::Pass => "PASS  ",
            Status::Fail => "FAIL  ",
            Status::Report => "REPORT",
        };
        let tol = r.tolerance.map_or_else(|| "-".to_string(), |t| format!("{t:.1e}"));
        s += &format!(
            "{tag} {}/{}  measured {:.3e}  tolerance {tol}\n",
            r.suite, r.invariant, r.measured
        );
    }
    s
}

/// Writes `text` to `path`, or to `out` when there is no path.
pub fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => out.write_all(text.as_bytes()),
    }
}
