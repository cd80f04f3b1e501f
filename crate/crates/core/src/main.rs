use std::f64::consts::TAU;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use twcc::density::conditional::conditional_pair_given_one;
use twcc::density::twcc_pdf;
use twcc::estimation::{
    bootstrap_ci, circular_center, fisher_information, fit_mle, log_likelihood, BootstrapKind, FitConfig,
};
use twcc::io::{output, read_angle_file, write_angles, write_grid, FitReport, IoError};
use twcc::params::{others, validate_rho, RhoParams};
use twcc::sampler::{sample_twcc, RngState};
use twcc::study::{run_study, summarize, write_study, Scenario, StudyConfig};
use twcc::{AngleSample, AnglePoint3, TwccError};

#[derive(Parser)]
#[command(name = "twcc", version, about = "Trivariate wrapped Cauchy copula toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct RhoArg {
    /// rho12 rho13 rho23
    #[arg(long, num_args = 3, allow_negative_numbers = true, value_names = ["R12", "R13", "R23"])]
    rho: Vec<f64>,
}

impl RhoArg {
    fn params(&self) -> Result<RhoParams, Failure> {
        validate_rho(self.rho[0], self.rho[1], self.rho[2]).map_err(Failure::Params)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Fit the copula to an angle CSV by maximum likelihood.
    Fit {
        /// CSV with header u1,u2,u3 (or phi,psi,omega); `-` reads stdin.
        #[arg(long)]
        input: PathBuf,
        /// Subtract each column's circular mean before fitting.
        #[arg(long)]
        center: bool,
        /// Random starts per branch.
        #[arg(long, default_value_t = 50)]
        starts: usize,
        /// Bootstrap replicates for percentile intervals (0 = none).
        #[arg(long, default_value_t = 0)]
        bootstrap: usize,
        /// Resample rows instead of simulating from the fit.
        #[arg(long)]
        resample: bool,
        /// Include the expected information matrix of the whole sample.
        #[arg(long)]
        fisher: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        degrees: bool,
        /// Emit JSON instead of TOML.
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw an exact sample.
    Sample {
        #[command(flatten)]
        rho: RhoArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Density of one angle triple.
    Pdf {
        #[command(flatten)]
        rho: RhoArg,
        #[arg(long, num_args = 3, allow_negative_numbers = true, value_names = ["U1", "U2", "U3"])]
        at: Vec<f64>,
    },
    /// Conditional density of two angles given the third, on an R x R grid.
    Grid {
        #[command(flatten)]
        rho: RhoArg,
        /// Fixed axis (1, 2 or 3) and its value.
        #[arg(long, num_args = 2, allow_negative_numbers = true, value_names = ["K", "VALUE"])]
        fix: Vec<f64>,
        #[arg(long, default_value_t = 100)]
        resolution: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Data whose rows near the fixed value are exported with --points-out.
        #[arg(long, requires = "points_out")]
        data: Option<PathBuf>,
        /// Half-width around the fixed value for exported data rows.
        #[arg(long, default_value_t = 0.1)]
        window: f64,
        #[arg(long, requires = "data")]
        points_out: Option<PathBuf>,
    },
    /// Repeated sampling and fitting at several sample sizes.
    Simulate {
        #[arg(long, default_value = "table-s1")]
        scenario: String,
        #[arg(long, default_value_t = 200)]
        replicates: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Truth for the custom scenario.
        #[arg(long, num_args = 3, allow_negative_numbers = true)]
        rho: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        /// Overrides the scenario's bootstrap size.
        #[arg(long)]
        bootstrap: Option<usize>,
        #[arg(long)]
        starts: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Log-likelihood of a saved fit on a dataset.
    Loglik {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        degrees: bool,
    },
}

enum Failure {
    Input(String),
    Fit(TwccError),
    Params(TwccError),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn error_name(e: &TwccError) -> String {
    format!("{e:?}").split(['{', '(', ' ']).next().unwrap_or_default().to_string()
}

fn read_input(path: &Path, degrees: bool) -> Result<AngleSample, Failure> {
    let csv = read_angle_file(path, degrees).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    for w in &csv.warnings {
        eprintln!("warning: {w}");
    }
    if csv.sample.is_empty() {
        return Err(Failure::Input(format!("{}: no data rows", path.display())));
    }
    Ok(csv.sample)
}

#[allow(clippy::too_many_arguments)]
fn cmd_fit(
    input: &Path,
    center: bool,
    starts: usize,
    bootstrap: usize,
    resample: bool,
    fisher: bool,
    seed: u64,
    degrees: bool,
    json: bool,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let mut sample = read_input(input, degrees)?;
    if center {
        sample = circular_center(&sample).map_err(Failure::Fit)?;
    }
    let cfg = FitConfig {
        n_starts: starts,
        bootstrap,
        bootstrap_kind: if resample { BootstrapKind::Resample } else { BootstrapKind::Parametric },
        seed,
        ..FitConfig::default()
    };
    cfg.validate().map_err(Failure::Params)?;
    let mut fit = fit_mle(&sample, &cfg).map_err(Failure::Fit)?;
    if fisher {
        let info = fisher_information(&fit.rho_hat).map_err(Failure::Fit)?;
        fit.fisher = Some(info.scaled(fit.n as f64));
    }
    if bootstrap > 0 {
        let b = bootstrap_ci(&sample, &fit, &cfg).map_err(Failure::Fit)?;
        if b.failures > 0 {
            eprintln!("warning: {} of {} bootstrap refits failed", b.failures, bootstrap);
        }
        for (a, z) in b.contains_zero.iter().enumerate() {
            if *z {
                eprintln!("warning: interval for {} contains zero", ["rho12", "rho13", "rho23"][a]);
            }
        }
        fit.bootstrap = Some(b);
    }
    let report = FitReport::new(&fit, &sample, &cfg);
    let text = if json { report.to_json()? } else { report.to_toml()? };
    let mut w = output(out)?;
    w.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_sample(rho: &RhoArg, n: usize, seed: u64, out: Option<&Path>) -> Result<(), Failure> {
    let p = rho.params()?;
    let s = sample_twcc(n, &p, RngState::new(seed, 0));
    write_angles(output(out)?, &s)?;
    Ok(())
}

fn cmd_pdf(rho: &RhoArg, at: &[f64]) -> Result<(), Failure> {
    let p = rho.params()?;
    let u = AnglePoint3::new(at[0], at[1], at[2]);
    println!("{}", twcc_pdf(&u, &p));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_grid(
    rho: &RhoArg,
    fix: &[f64],
    resolution: usize,
    out: Option<&Path>,
    data: Option<&Path>,
    window: f64,
    points_out: Option<&Path>,
) -> Result<(), Failure> {
    let p = rho.params()?;
    let k = fix[0];
    if !(k == 1.0 || k == 2.0 || k == 3.0) {
        return Err(Failure::Params(TwccError::InvalidArgument(format!("fixed axis must be 1, 2 or 3, got {k}"))));
    }
    if resolution == 0 {
        return Err(Failure::Params(TwccError::InvalidArgument("resolution must be positive".into())));
    }
    if !fix[1].is_finite() {
        return Err(Failure::Params(TwccError::NonFinite { name: "fix value", value: fix[1] }));
    }
    let k = k as usize - 1;
    let uk = twcc::reduce_angle(fix[1]);
    let h = TAU / resolution as f64;
    let mut rows = Vec::with_capacity(resolution * resolution);
    for a in 0..resolution {
        for b in 0..resolution {
            let (ui, uj) = (a as f64 * h, b as f64 * h);
            rows.push([ui, uj, conditional_pair_given_one(ui, uj, uk, k, &p)]);
        }
    }
    write_grid(output(out)?, &rows)?;
    if let (Some(data), Some(points_out)) = (data, points_out) {
        let s = read_input(data, false)?;
        let near: Vec<[f64; 3]> = s
            .rows()
            .iter()
            .filter(|u| {
                let d = (u[k] - uk).rem_euclid(TAU);
                d.min(TAU - d) <= window
            })
            .copied()
            .collect();
        let (i, j) = others(k);
        eprintln!("{} of {} rows within {window} of u{} = {uk}; columns u{},u{}", near.len(), s.len(), k + 1, i + 1, j + 1);
        write_angles(output(Some(points_out))?, &AngleSample::new(near).map_err(Failure::Fit)?)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    scenario: &str,
    replicates: usize,
    seed: u64,
    rho: Option<&[f64]>,
    sizes: Option<Vec<usize>>,
    bootstrap: Option<usize>,
    starts: Option<usize>,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let sc: Scenario = scenario.parse().map_err(Failure::Params)?;
    let mut cfg = match sc {
        Scenario::Custom => {
            let (Some(r), Some(sz)) = (rho, sizes.clone()) else {
                return Err(Failure::Params(TwccError::InvalidArgument("custom scenario needs --rho and --sizes".into())));
            };
            StudyConfig {
                truth: validate_rho(r[0], r[1], r[2]).map_err(Failure::Params)?,
                sizes: sz,
                replicates,
                seed,
                fit: FitConfig { bootstrap: 0, seed, ..FitConfig::default() },
            }
        }
        _ => StudyConfig::for_scenario(sc, replicates, seed).map_err(Failure::Params)?,
    };
    if let Some(sz) = sizes {
        cfg.sizes = sz;
    }
    if let Some(b) = bootstrap {
        cfg.fit.bootstrap = b;
    }
    if let Some(s) = starts {
        cfg.fit.n_starts = s;
    }
    let results = run_study(&cfg).map_err(Failure::Params)?;
    let rows = summarize(&cfg, &results);
    write_study(output(out)?, &rows).map_err(|e| Failure::Input(e.to_string()))?;
    Ok(())
}

fn cmd_loglik(report: &Path, input: &Path, degrees: bool) -> Result<(), Failure> {
    let text = fs::read_to_string(report).map_err(|e| Failure::Input(format!("{}: {e}", report.display())))?;
    let rep = FitReport::parse(&text)?;
    let p = validate_rho(rep.rho_hat[0], rep.rho_hat[1], rep.rho_hat[2]).map_err(Failure::Params)?;
    let mut s = read_input(input, degrees)?;
    if let Some(off) = rep.centering_offsets {
        let rows = s.rows().iter().map(|u| [0, 1, 2].map(|c| u[c] - off[c])).collect();
        s = AngleSample::centered(rows, off).map_err(Failure::Fit)?;
    }
    println!("{:?}", log_likelihood(&s, &p));
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Command::Fit { input, center, starts, bootstrap, resample, fisher, seed, degrees, json, out } => {
            cmd_fit(&input, center, starts, bootstrap, resample, fisher, seed, degrees, json, out.as_deref())
        }
        Command::Sample { rho, n, seed, out } => cmd_sample(&rho, n, seed, out.as_deref()),
        Command::Pdf { rho, at } => cmd_pdf(&rho, &at),
        Command::Grid { rho, fix, resolution, out, data, window, points_out } => {
            cmd_grid(&rho, &fix, resolution, out.as_deref(), data.as_deref(), window, points_out.as_deref())
        }
        Command::Simulate { scenario, replicates, seed, rho, sizes, bootstrap, starts, out } => {
            cmd_simulate(&scenario, replicates, seed, rho.as_deref(), sizes, bootstrap, starts, out.as_deref())
        }
        Command::Loglik { report, input, degrees } => cmd_loglik(&report, &input, degrees),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Fit(e)) => {
            eprintln!("error: fit failed ({}): {e}", error_name(&e));
            ExitCode::from(3)
        }
        Err(Failure::Params(e)) => {
            eprintln!("error: invalid parameters ({}): {e}", error_name(&e));
            ExitCode::from(4)
        }
    }
}
