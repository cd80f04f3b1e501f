//! Maximum likelihood over the three branches `(zeta_ij, rho_ik)`.
//!
//! Each branch is an open box: `zeta` in `(-1, 0) u (0, 1)` and `rho_ik`
//! nonzero. The two signs of each coordinate are handled as separate
//! sub-branches, and inside a sub-branch the box is mapped smoothly onto the
//! plane so the local search is unconstrained.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bootstrap::{BootstrapKind, BootstrapSummary};
use super::fisher::FisherInfo;
use super::likelihood::{log_likelihood, SampleCosines};
use crate::angles::AngleSample;
use crate::error::{Result, TwccError};
use crate::numerics::optim::{bfgs, BfgsOptions, LogMagnitude, Logistic, Termination};
use crate::params::{from_zeta, to_zeta, zeta_scale, zeta_scale_deriv, Perm, RhoParams, ZetaBranch};
use crate::sampler::RngState;

/// Settings of [`fit_mle`] and of the bootstrap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    /// Random starts per branch.
    pub n_starts: usize,
    /// `|rho_ik|` is searched in `(1 / bound, bound)`.
    pub rho_ik_bound: f64,
    /// Excluded half-width around `zeta = 0` and `|zeta| = 1`.
    pub zeta_margin: f64,
    pub grad_tol: f64,
    pub step_tol: f64,
    pub max_iter: usize,
    /// Bootstrap replicates; zero disables the bootstrap.
    pub bootstrap: usize,
    /// Random starts per branch in each bootstrap refit, on top of a start
    /// at the original estimate.
    pub bootstrap_starts: usize,
    pub bootstrap_kind: BootstrapKind,
    pub seed: u64,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            n_starts: 50,
            rho_ik_bound: 1e3,
            zeta_margin: 1e-6,
            grad_tol: 1e-8,
            step_tol: 1e-8,
            max_iter: 500,
            bootstrap: 200,
            bootstrap_starts: 2,
            bootstrap_kind: BootstrapKind::Parametric,
            seed: 0,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(TwccError::InvalidArgument(what.to_string()));
        if self.n_starts == 0 {
            return bad("n_starts must be at least 1");
        }
        if !(self.rho_ik_bound > 1.0) || !self.rho_ik_bound.is_finite() {
            return bad("rho_ik_bound must exceed 1");
        }
        if !(self.zeta_margin > 0.0 && self.zeta_margin < 0.25) {
            return bad("zeta_margin must lie in (0, 0.25)");
        }
        if !(self.grad_tol > 0.0 && self.step_tol > 0.0) || self.max_iter == 0 {
            return bad("optimizer tolerances and iteration cap must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    /// Estimate with `rho12 rho13 rho23 = 1`.
    pub rho_hat: RhoParams,
    pub loglik: f64,
    pub n: usize,
    /// Winning branch `(i*, j*, k*)`.
    pub branch: Perm,
    pub zeta: ZetaBranch,
    pub starts_total: usize,
    pub starts_converged: usize,
    /// Max-norm of the mean log-likelihood gradient in `(zeta, rho_ik)` at the estimate.
    pub projected_gradient: f64,
    pub fisher: Option<FisherInfo>,
    pub bootstrap: Option<BootstrapSummary>,
}

/// Mean log-likelihood on one sign sub-branch, in plane coordinates.
struct BranchObjective<'a> {
    cos: &'a SampleCosines,
    perm: Perm,
    zeta_sign: f64,
    rho_sign: f64,
    zmap: Logistic,
    rmap: LogMagnitude,
}

struct Point {
    rho: [f64; 3],
    value: f64,
    /// Gradient in `(zeta, rho_ik)`.
    coord_grad: [f64; 2],
    /// Gradient in plane coordinates.
    plane_grad: [f64; 2],
}

impl BranchObjective<'_> {
    fn eval(&self, x: &[f64]) -> Option<Point> {
        let zeta = self.zeta_sign * self.zmap.value(x[0]);
        let b = self.rmap.value(x[1]);
        let rho_ik = self.rho_sign * b;
        let g = zeta_scale(b);
        let gp = zeta_scale_deriv(b);
        let rho_ij = g / zeta;
        let rho_jk = 1.0 / (rho_ij * rho_ik);
        let (ij, ik, jk) = (self.perm.pair_ij().index(), self.perm.pair_ik().index(), self.perm.pair_jk().index());
        let mut rho = [0.0; 3];
        rho[ij] = rho_ij;
        rho[ik] = rho_ik;
        rho[jk] = rho_jk;
        let p = RhoParams::new(rho[0], rho[1], rho[2]).ok()?;
        if p.dominant() != self.perm.i {
            return None;
        }
        let (value, gr) = self.cos.mean_loglik_grad(&rho)?;
        let dij_dz = -g / (zeta * zeta);
        let djk_dz = 1.0 / (g * rho_ik);
        let dij_dr = gp * self.rho_sign / zeta;
        let djk_dr = -zeta * (gp * b + g) / (g * g * rho_ik * rho_ik);
        let dz = gr[ij] * dij_dz + gr[jk] * djk_dz;
        let dr = gr[ik] + gr[ij] * dij_dr + gr[jk] * djk_dr;
        let plane = [dz * self.zeta_sign * self.zmap.deriv(x[0]), dr * self.rho_sign * self.rmap.deriv(x[1])];
        Some(Point { rho, value, coord_grad: [dz, dr], plane_grad: plane })
    }
}

struct Outcome {
    branch_index: usize,
    rho: [f64; 3],
    value: f64,
    converged: bool,
    coord_grad: [f64; 2],
}

fn run_start(obj: &BranchObjective<'_>, x0: [f64; 2], opts: &BfgsOptions, branch_index: usize) -> Option<Outcome> {
    let r = bfgs(
        |x| obj.eval(x).map(|pt| (-pt.value, pt.plane_grad.iter().map(|v| -v).collect())),
        &x0,
        opts,
    )?;
    let pt = obj.eval(&r.x)?;
    let gmax = r.grad.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let converged = r.converged() || (r.termination == Termination::LineSearch && gmax < 1e-6);
    Some(Outcome { branch_index, rho: pt.rho, value: pt.value, converged, coord_grad: pt.coord_grad })
}

/// Starting point description: branch, signs and plane coordinates.
struct Start {
    branch_index: usize,
    zeta_sign: f64,
    rho_sign: f64,
    x0: [f64; 2],
}

fn maps(cfg: &FitConfig) -> (Logistic, LogMagnitude) {
    (
        Logistic { lo: cfg.zeta_margin, hi: 1.0 - cfg.zeta_margin },
        LogMagnitude { bound: cfg.rho_ik_bound },
    )
}

/// Start `k` of a branch; signs cycle through the four sub-branches.
fn random_start(branch_index: usize, k: usize, cfg: &FitConfig, rng: RngState) -> Start {
    let (zmap, rmap) = maps(cfg);
    let mut g = rng.rng();
    let m = cfg.zeta_margin;
    let zeta_abs = m + (1.0 - 2.0 * m) * g.gen::<f64>();
    let zeta_sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let lo = 1e-2f64.ln();
    let hi = cfg.rho_ik_bound.ln();
    let rho_abs = (lo + (hi - lo) * g.gen::<f64>()).exp();
    let rho_sign = if k % 4 < 2 { 1.0 } else { -1.0 };
    Start { branch_index, zeta_sign, rho_sign, x0: [zmap.inverse(zeta_abs), rmap.inverse(rho_abs)] }
}

fn warm_start(p: &RhoParams, cfg: &FitConfig) -> Option<Start> {
    let (zmap, rmap) = maps(cfg);
    let branch_index = Perm::SEARCH_ORDER.iter().position(|q| q.i == p.dominant())?;
    let z = to_zeta(p, Perm::SEARCH_ORDER[branch_index]).ok()?;
    Some(Start {
        branch_index,
        zeta_sign: z.zeta.signum(),
        rho_sign: z.rho_ik.signum(),
        x0: [zmap.inverse(z.zeta.abs()), rmap.inverse(z.rho_ik.abs())],
    })
}

fn check_sample(s: &AngleSample) -> Result<()> {
    if s.len() < 4 {
        return Err(TwccError::DegenerateSample(format!("{} rows; at least 4 are needed", s.len())));
    }
    let first = s.rows()[0];
    if s.rows().iter().all(|r| *r == first) {
        return Err(TwccError::DegenerateSample("all rows are identical".into()));
    }
    Ok(())
}

pub(crate) fn fit_core(
    s: &AngleSample,
    cfg: &FitConfig,
    rng: RngState,
    warm: Option<&RhoParams>,
    starts_per_branch: usize,
) -> Result<FitResult> {
    cfg.validate()?;
    check_sample(s)?;
    let cos = SampleCosines::new(s);
    let (zmap, rmap) = maps(cfg);
    let mut starts: Vec<Start> = warm.and_then(|p| warm_start(p, cfg)).into_iter().collect();
    for b in 0..3 {
        let branch_rng = rng.derive(b as u64);
        for k in 0..starts_per_branch {
            starts.push(random_start(b, k, cfg, branch_rng.derive(k as u64)));
        }
    }
    let opts = BfgsOptions { max_iter: cfg.max_iter, grad_tol: cfg.grad_tol, step_tol: cfg.step_tol };
    let outcomes: Vec<Option<Outcome>> = starts
        .par_iter()
        .map(|st| {
            let obj = BranchObjective {
                cos: &cos,
                perm: Perm::SEARCH_ORDER[st.branch_index],
                zeta_sign: st.zeta_sign,
                rho_sign: st.rho_sign,
                zmap,
                rmap,
            };
            run_start(&obj, st.x0, &opts, st.branch_index)
        })
        .collect();
    let starts_total = outcomes.len();
    let starts_converged = outcomes.iter().flatten().filter(|o| o.converged).count();
    let n = s.len() as f64;
    let mut best: Option<&Outcome> = None;
    for o in outcomes.iter().flatten() {
        best = match best {
            None => Some(o),
            Some(b) => {
                let tol = 1e-9 * (b.value * n).abs().max(1.0);
                let diff = (o.value - b.value) * n;
                let o_key = Perm::SEARCH_ORDER[o.branch_index].one_based();
                let b_key = Perm::SEARCH_ORDER[b.branch_index].one_based();
                if diff > tol || (diff.abs() <= tol && o_key < b_key) {
                    Some(o)
                } else {
                    Some(b)
                }
            }
        };
    }
    let best = best.ok_or(TwccError::AllStartsFailed { starts: starts_total })?;
    let perm = Perm::SEARCH_ORDER[best.branch_index];
    let p = RhoParams::new(best.rho[0], best.rho[1], best.rho[2])?;
    let zeta = to_zeta(&p, perm)?;
    let rho_hat = from_zeta(&zeta)?;
    Ok(FitResult {
        rho_hat,
        loglik: log_likelihood(s, &rho_hat),
        n: s.len(),
        branch: perm,
        zeta,
        starts_total,
        starts_converged,
        projected_gradient: best.coord_grad[0].abs().max(best.coord_grad[1].abs()),
        fisher: None,
        bootstrap: None,
    })
}

/// Maximum likelihood estimate, seeded from `cfg.seed`.
pub fn fit_mle(s: &AngleSample, cfg: &FitConfig) -> Result<FitResult> {
    fit_mle_with_rng(s, cfg, RngState::new(cfg.seed, 0))
}

/// Maximum likelihood estimate with starting points drawn from `rng`.
pub fn fit_mle_with_rng(s: &AngleSample, cfg: &FitConfig, rng: RngState) -> Result<FitResult> {
    fit_core(s, cfg, rng, None, cfg.n_starts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::validate_rho;
    use crate::sampler::sample_twcc;

    #[test]
    fn chain_rule_matches_differences() {
        let p = validate_rho(1.0, 0.25, 4.0).unwrap();
        let s = sample_twcc(200, &p, RngState::new(3, 0));
        let cos = SampleCosines::new(&s);
        let cfg = FitConfig::default();
        let (zmap, rmap) = maps(&cfg);
        for (b, zs, rs) in [(1usize, 1.0, 1.0), (1, -1.0, -1.0), (0, 1.0, -1.0), (2, -1.0, 1.0)] {
            let obj = BranchObjective { cos: &cos, perm: Perm::SEARCH_ORDER[b], zeta_sign: zs, rho_sign: rs, zmap, rmap };
            let x = [0.3, -0.2];
            let pt = obj.eval(&x).unwrap();
            let h = 1e-6;
            for a in 0..2 {
                let mut up = x;
                up[a] += h;
                let mut dn = x;
                dn[a] -= h;
                let fd = (obj.eval(&up).unwrap().value - obj.eval(&dn).unwrap().value) / (2.0 * h);
                assert!((fd - pt.plane_grad[a]).abs() < 1e-6 * fd.abs().max(1.0), "{fd} {}", pt.plane_grad[a]);
            }
        }
    }

    #[test]
    fn degenerate_samples() {
        let cfg = FitConfig::default();
        let s = AngleSample::new(vec![[1.0, 2.0, 3.0]; 10]).unwrap();
        assert!(matches!(fit_mle(&s, &cfg), Err(TwccError::DegenerateSample(_))));
        let t = AngleSample::new(vec![[1.0, 2.0, 3.0], [0.0, 0.0, 0.0]]).unwrap();
        assert!(matches!(fit_mle(&t, &cfg), Err(TwccError::DegenerateSample(_))));
    }

    #[test]
    fn recovers_and_dominates_truth() {
        let p = validate_rho(1.0, 0.25, 4.0).unwrap().normalize();
        let s = sample_twcc(20_000, &p, RngState::new(4, 0));
        let cfg = FitConfig { n_starts: 10, ..Default::default() };
        let r = fit_mle(&s, &cfg).unwrap();
        assert_eq!(r.branch.i, 1);
        assert!((r.rho_hat.product() - 1.0).abs() < 1e-10);
        assert!(r.loglik >= log_likelihood(&s, &p) - 1e-9);
        assert!(r.projected_gradient < 1e-5, "{}", r.projected_gradient);
        for (a, b) in r.rho_hat.as_array().iter().zip(p.as_array()) {
            assert!((a - b).abs() < 0.25 * b.abs(), "{:?} vs {:?}", r.rho_hat, p);
        }
        let again = fit_mle(&s, &cfg).unwrap();
        assert_eq!(again, r);
    }
}
