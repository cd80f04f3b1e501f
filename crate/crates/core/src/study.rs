//! Monte Carlo studies: repeated sampling and fitting at several sample sizes.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::estimation::{bootstrap_ci, fit_mle, BootstrapSummary, FitConfig};
use crate::error::{Result, TwccError};
use crate::params::{validate_rho, RhoParams};
use crate::sampler::{sample_twcc, RngState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    /// Truth `(1, -4, -0.25)`, sizes 100, 500, 1000, bootstrap intervals.
    TableS1,
    /// Truth `(1, 0.25, 4)`, sizes 100, 500, 1000, 2000, point estimates.
    FigS1,
    Custom,
}

impl std::str::FromStr for Scenario {
    type Err = TwccError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table-s1" => Ok(Scenario::TableS1),
            "fig-s1" => Ok(Scenario::FigS1),
            "custom" => Ok(Scenario::Custom),
            other => Err(TwccError::InvalidArgument(format!("unknown scenario `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub truth: RhoParams,
    pub sizes: Vec<usize>,
    pub replicates: usize,
    pub seed: u64,
    /// `fit.bootstrap = 0` skips intervals.
    pub fit: FitConfig,
}

impl StudyConfig {
    /// Defaults of a named scenario; `Custom` needs explicit truth and sizes.
    pub fn for_scenario(s: Scenario, replicates: usize, seed: u64) -> Result<StudyConfig> {
        let (truth, sizes, bootstrap) = match s {
            Scenario::TableS1 => (validate_rho(1.0, -4.0, -0.25)?, vec![100, 500, 1000], 200),
            Scenario::FigS1 => (validate_rho(1.0, 0.25, 4.0)?, vec![100, 500, 1000, 2000], 0),
            Scenario::Custom => {
                return Err(TwccError::InvalidArgument("custom scenario needs --rho and --sizes".into()))
            }
        };
        Ok(StudyConfig { truth, sizes, replicates, seed, fit: FitConfig { bootstrap, ..FitConfig::default() } })
    }
}

/// One replicate: estimate and, when requested, its bootstrap summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Replicate {
    pub estimate: [f64; 3],
    pub dominant: usize,
    pub interval: Option<BootstrapSummary>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SizeResult {
    pub n: usize,
    /// `None` where the fit failed.
    pub replicates: Vec<Option<Replicate>>,
}

/// Summary line of one `(n, parameter)` combination.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyRow {
    pub n: usize,
    pub parameter: String,
    pub truth: f64,
    pub median: f64,
    pub median_abs_error: f64,
    pub median_lower: Option<f64>,
    pub median_upper: Option<f64>,
    pub coverage: Option<f64>,
    pub fitted: usize,
    pub failures: usize,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    crate::estimation::percentile(&v, 0.5)
}

/// Fits replicate `r` at size `n`. Data and fit streams derive from
/// `(seed, n, r)`, so the outcome does not depend on scheduling.
pub fn run_replicate(cfg: &StudyConfig, n: usize, r: usize) -> Option<Replicate> {
    let unit = RngState::new(cfg.seed, 2).derive(n as u64).derive(r as u64);
    let data = sample_twcc(n, &cfg.truth, unit.derive(0));
    let fit_cfg = FitConfig { seed: unit.derive(1).stream, ..cfg.fit };
    let fit = fit_mle(&data, &fit_cfg).ok()?;
    let interval = if cfg.fit.bootstrap > 0 { bootstrap_ci(&data, &fit, &fit_cfg).ok() } else { None };
    Some(Replicate { estimate: fit.rho_hat.as_array(), dominant: fit.rho_hat.dominant(), interval })
}

pub fn run_study(cfg: &StudyConfig) -> Result<Vec<SizeResult>> {
    if cfg.replicates == 0 || cfg.sizes.is_empty() {
        return Err(TwccError::InvalidArgument("study needs at least one replicate and one size".into()));
    }
    cfg.fit.validate()?;
    Ok(cfg
        .sizes
        .iter()
        .map(|&n| SizeResult {
            n,
            replicates: (0..cfg.replicates).into_par_iter().map(|r| run_replicate(cfg, n, r)).collect(),
        })
        .collect())
}

pub fn summarize(cfg: &StudyConfig, results: &[SizeResult]) -> Vec<StudyRow> {
    let truth = cfg.truth.normalize().as_array();
    let mut rows = Vec::new();
    for res in results {
        let ok: Vec<&Replicate> = res.replicates.iter().flatten().collect();
        for (a, name) in ["rho12", "rho13", "rho23"].iter().enumerate() {
            let est: Vec<f64> = ok.iter().map(|r| r.estimate[a]).collect();
            let ci: Vec<&BootstrapSummary> = ok.iter().filter_map(|r| r.interval.as_ref()).collect();
            let (lo, hi, cov) = if ci.is_empty() {
                (None, None, None)
            } else {
                let covered = ci.iter().filter(|b| b.covers(&truth)[a]).count();
                (
                    Some(median(ci.iter().map(|b| b.lower[a]).collect())),
                    Some(median(ci.iter().map(|b| b.upper[a]).collect())),
                    Some(covered as f64 / ci.len() as f64),
                )
            };
            let (med, err) = if est.is_empty() {
                (f64::NAN, f64::NAN)
            } else {
                (median(est.clone()), median(est.iter().map(|e| (e - truth[a]).abs()).collect()))
            };
            rows.push(StudyRow {
                n: res.n,
                parameter: (*name).into(),
                truth: truth[a],
                median: med,
                median_abs_error: err,
                median_lower: lo,
                median_upper: hi,
                coverage: cov,
                fitted: ok.len(),
                failures: res.replicates.len() - ok.len(),
            });
        }
    }
    rows
}

pub fn write_study<W: Write>(writer: W, rows: &[StudyRow]) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
