//! File formats: angle CSV files, fit reports and grid tables.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytics::{corr_coefficients, modes};
use crate::angles::{reduce_angle, AngleSample};
use crate::estimation::{BootstrapSummary, FitConfig, FitResult};
use crate::params::Pair;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("header must be `u1,u2,u3` or `phi,psi,omega`, found `{0}`")]
    Header(String),
    #[error("row {row}: column {column} value `{value}` is not a number")]
    Parse { row: usize, column: usize, value: String },
    #[error("row {row}: expected 3 columns, found {found}")]
    Width { row: usize, found: usize },
    #[error("input is empty")]
    Empty,
    #[error("report: {0}")]
    Report(String),
}

/// Parsed angle file.
#[derive(Debug, Clone)]
pub struct AngleCsv {
    pub sample: AngleSample,
    /// One message per value that was outside `[0, 2pi)` and got reduced.
    pub warnings: Vec<String>,
}

fn open_input(path: &Path) -> Result<Box<dyn Read>, IoError> {
    if path.as_os_str() == "-" {
        Ok(Box::new(io::stdin()))
    } else {
        Ok(Box::new(File::open(path)?))
    }
}

/// Reads a header-led CSV of three angle columns; rows are 1-based in
/// messages, counting the header as row 1.
pub fn read_angles<R: Read>(reader: R, degrees: bool) -> Result<AngleCsv, IoError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let header = rdr.headers()?.clone();
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Err(IoError::Empty);
    }
    let names: Vec<String> = header.iter().map(|h| h.to_ascii_lowercase()).collect();
    if names != ["u1", "u2", "u3"] && names != ["phi", "psi", "omega"] {
        return Err(IoError::Header(header.iter().collect::<Vec<_>>().join(",")));
    }
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for (m, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = m + 2;
        if rec.len() != 3 {
            return Err(IoError::Width { row, found: rec.len() });
        }
        let mut u = [0.0; 3];
        for (c, field) in rec.iter().enumerate() {
            let v: f64 = field
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| IoError::Parse { row, column: c + 1, value: field.to_string() })?;
            let v = if degrees { v.to_radians() } else { v };
            if !(0.0..std::f64::consts::TAU).contains(&v) {
                warnings.push(format!("row {row}: column {} value {v} reduced modulo 2pi", c + 1));
            }
            u[c] = reduce_angle(v);
        }
        rows.push(u);
    }
    let sample = AngleSample::new(rows).expect("finite values");
    Ok(AngleCsv { sample, warnings })
}

pub fn read_angle_file(path: &Path, degrees: bool) -> Result<AngleCsv, IoError> {
    let mut buf = Vec::new();
    open_input(path)?.read_to_end(&mut buf)?;
    if buf.iter().all(|b| b.is_ascii_whitespace()) {
        return Err(IoError::Empty);
    }
    read_angles(buf.as_slice(), degrees)
}

/// Writes `u1,u2,u3` and one row per sample, shortest round-trip decimals.
pub fn write_angles<W: Write>(writer: W, s: &AngleSample) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["u1", "u2", "u3"])?;
    for u in s.rows() {
        w.write_record(u.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Opens `path` for writing, or stdout when `None` or `-`.
pub fn output(path: Option<&Path>) -> Result<Box<dyn Write>, IoError> {
    match path {
        Some(p) if p.as_os_str() != "-" => Ok(Box::new(BufWriter::new(File::create(p)?))),
        _ => Ok(Box::new(BufWriter::new(io::stdout()))),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSummary {
    pub pair: String,
    pub phi: f64,
    pub varphi: f64,
    pub rho_jw: f64,
    pub rho_jm: f64,
    pub rho_fl: f64,
}

/// Serialized outcome of a fit. Field order is the key order on output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub rho_hat: [f64; 3],
    pub branch: String,
    pub loglik: f64,
    pub n: usize,
    pub centered: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub centering_offsets: Option<[f64; 3]>,
    pub starts_total: usize,
    pub starts_converged: usize,
    pub projected_gradient: f64,
    pub mode: String,
    pub antimode: String,
    pub seed: u64,
    pub pairs: Vec<PairSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fisher: Option<[[f64; 3]; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bootstrap: Option<BootstrapSummary>,
    pub config: FitConfig,
}

impl FitReport {
    pub fn new(fit: &FitResult, sample: &AngleSample, cfg: &FitConfig) -> FitReport {
        let p = fit.rho_hat;
        let (mode, antimode) = modes(&p);
        let pairs = Pair::ALL
            .iter()
            .map(|&pair| {
                let f = p.pairwise_phi(pair);
                let c = corr_coefficients(&p, pair);
                PairSummary { pair: pair.label().into(), phi: f.phi, varphi: f.varphi, rho_jw: c.jw, rho_jm: c.jm, rho_fl: c.fl }
            })
            .collect();
        FitReport {
            rho_hat: p.as_array(),
            branch: fit.branch.to_string(),
            loglik: fit.loglik,
            n: fit.n,
            centered: sample.is_centered(),
            centering_offsets: sample.centering_offsets(),
            starts_total: fit.starts_total,
            starts_converged: fit.starts_converged,
            projected_gradient: fit.projected_gradient,
            mode: mode.to_string(),
            antimode: antimode.to_string(),
            seed: cfg.seed,
            pairs,
            fisher: fit.fisher.map(|f| f.matrix),
            bootstrap: fit.bootstrap.clone(),
            config: *cfg,
        }
    }

    pub fn to_toml(&self) -> Result<String, IoError> {
        toml::to_string(self).map_err(|e| IoError::Report(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String, IoError> {
        serde_json::to_string_pretty(self).map_err(|e| IoError::Report(e.to_string()))
    }

    /// Parses either format.
    pub fn parse(text: &str) -> Result<FitReport, IoError> {
        if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| IoError::Report(e.to_string()))
        } else {
            toml::from_str(text).map_err(|e| IoError::Report(e.to_string()))
        }
    }
}

/// Writes `ui,uj,density` rows.
pub fn write_grid<W: Write>(writer: W, rows: &[[f64; 3]]) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["ui", "uj", "density"])?;
    for r in rows {
        w.write_record(r.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
