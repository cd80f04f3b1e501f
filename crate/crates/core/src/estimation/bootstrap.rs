//! Bootstrap percentile intervals for the normalized estimate.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::{fit_core, FitConfig, FitResult};
use crate::angles::AngleSample;
use crate::error::{Result, TwccError};
use crate::sampler::{sample_twcc, RngState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BootstrapKind {
    /// Samples drawn from the fitted density.
    Parametric,
    /// Rows drawn with replacement from the data.
    Resample,
}

/// Replicate summary; index order is `(rho12, rho13, rho23)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapSummary {
    pub replicates: usize,
    pub failures: usize,
    pub median: [f64; 3],
    pub lower: [f64; 3],
    pub upper: [f64; 3],
    /// Intervals that straddle zero; zero itself is excluded from them.
    pub contains_zero: [bool; 3],
}

impl BootstrapSummary {
    pub fn covers(&self, truth: &[f64; 3]) -> [bool; 3] {
        [0, 1, 2].map(|a| self.lower[a] <= truth[a] && truth[a] <= self.upper[a] && truth[a] != 0.0)
    }
}

/// Linear-interpolation percentile of a sorted slice, `q` in `[0, 1]`.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Bootstrap around an existing fit of `s`. Replicate `r` draws from the
/// stream derived from `(cfg.seed, r)`; results are merged in replicate order.
pub fn bootstrap_ci(s: &AngleSample, fit: &FitResult, cfg: &FitConfig) -> Result<BootstrapSummary> {
    if cfg.bootstrap == 0 {
        return Err(TwccError::InvalidArgument("bootstrap needs at least one replicate".into()));
    }
    let base = RngState::new(cfg.seed, 1);
    let estimates: Vec<Option<[f64; 3]>> = (0..cfg.bootstrap)
        .into_par_iter()
        .map(|r| {
            let unit = base.derive(r as u64);
            let data = match cfg.bootstrap_kind {
                BootstrapKind::Parametric => sample_twcc(s.len(), &fit.rho_hat, unit.derive(0)),
                BootstrapKind::Resample => resample(s, unit.derive(0)),
            };
            fit_core(&data, cfg, unit.derive(1), Some(&fit.rho_hat), cfg.bootstrap_starts)
                .ok()
                .map(|f| f.rho_hat.as_array())
        })
        .collect();
    let ok: Vec<[f64; 3]> = estimates.iter().flatten().copied().collect();
    let failures = estimates.len() - ok.len();
    if ok.is_empty() {
        return Err(TwccError::AllStartsFailed { starts: cfg.bootstrap });
    }
    let mut median = [0.0; 3];
    let mut lower = [0.0; 3];
    let mut upper = [0.0; 3];
    let mut contains_zero = [false; 3];
    for a in 0..3 {
        let mut v: Vec<f64> = ok.iter().map(|e| e[a]).collect();
        v.sort_by(f64::total_cmp);
        median[a] = percentile(&v, 0.5);
        lower[a] = percentile(&v, 0.025);
        upper[a] = percentile(&v, 0.975);
        contains_zero[a] = lower[a] < 0.0 && upper[a] > 0.0;
    }
    Ok(BootstrapSummary { replicates: cfg.bootstrap, failures, median, lower, upper, contains_zero })
}

fn resample(s: &AngleSample, rng: RngState) -> AngleSample {
    use rand::Rng;
    let mut g = rng.rng();
    let rows = (0..s.len()).map(|_| s.rows()[g.gen_range(0..s.len())]).collect();
    AngleSample::new(rows).expect("rows already reduced")
}
