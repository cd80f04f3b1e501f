//! Behaviour of the maximum likelihood fit and the bootstrap on simulated data.

mod common;

use twcc::estimation::{bootstrap_ci, fit_mle, log_likelihood, score, FitConfig};
use twcc::params::validate_rho;
use twcc::sampler::{sample_twcc, RngState};

fn quick(n_starts: usize, seed: u64) -> FitConfig {
    FitConfig { n_starts, bootstrap: 0, seed, ..FitConfig::default() }
}

#[test]
fn winning_branch_is_the_true_one() {
    let p = validate_rho(1.0, 0.25, 4.0).unwrap();
    let hits = (0..100)
        .filter(|&r| {
            let s = sample_twcc(2000, &p, RngState::new(100 + r, 0));
            fit_mle(&s, &quick(10, r)).unwrap().branch.i == p.dominant()
        })
        .count();
    assert!(hits >= 90, "{hits} of 100");
}

#[test]
fn fit_dominates_truth_and_is_stationary() {
    for (r, seed) in [([1.0, 0.25, 4.0], 1), ([1.0, -4.0, -0.25], 2), ([0.611, -1.31, -1.25], 3)] {
        let p = validate_rho(r[0], r[1], r[2]).unwrap();
        let s = sample_twcc(1500, &p, RngState::new(seed, 0));
        let f = fit_mle(&s, &quick(20, seed)).unwrap();
        assert!(f.loglik >= log_likelihood(&s, &p));
        assert!(f.projected_gradient < 1e-5, "{}", f.projected_gradient);
        assert!(f.rho_hat.is_normalized());
        // the score vanishes in every direction at an interior optimum
        let g = score(&s, &f.rho_hat);
        let size = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(size < 1e-4 * s.len() as f64, "{g:?}");
        assert_eq!(fit_mle(&s, &quick(20, seed)).unwrap(), f);
    }
}

#[test]
fn large_sample_close_to_truth() {
    let p = validate_rho(1.0, 0.25, 4.0).unwrap();
    let s = sample_twcc(5000, &p, RngState::new(77, 0));
    let f = fit_mle(&s, &quick(20, 0)).unwrap();
    for (a, b) in f.rho_hat.as_array().iter().zip(p.as_array()) {
        assert!((a - b).abs() < 0.35 * b.abs(), "{:?}", f.rho_hat);
    }
}

#[test]
fn refit_on_data_from_the_fit_is_self_consistent() {
    let p = validate_rho(0.611, -1.31, -1.25).unwrap();
    let s = sample_twcc(3000, &p, RngState::new(8, 0));
    let f = fit_mle(&s, &quick(20, 1)).unwrap();
    let t = sample_twcc(20_000, &f.rho_hat, RngState::new(9, 0));
    let g = fit_mle(&t, &quick(20, 2)).unwrap();
    for (a, b) in g.rho_hat.as_array().iter().zip(f.rho_hat.as_array()) {
        assert!((a - b).abs() < 0.15 * b.abs(), "{:?} vs {:?}", g.rho_hat, f.rho_hat);
    }
}

#[test]
fn intervals_shrink_with_sample_size() {
    let p = validate_rho(1.0, -4.0, -0.25).unwrap();
    let width = |n: usize| {
        let s = sample_twcc(n, &p, RngState::new(n as u64, 0));
        let cfg = FitConfig { n_starts: 10, bootstrap: 100, seed: 3, ..FitConfig::default() };
        let f = fit_mle(&s, &cfg).unwrap();
        let b = bootstrap_ci(&s, &f, &cfg).unwrap();
        [0, 1, 2].map(|a| b.upper[a] - b.lower[a])
    };
    let (small, large) = (width(100), width(1000));
    for a in 0..3 {
        assert!(large[a] < small[a], "{small:?} vs {large:?}");
    }
}

#[test]
fn bootstrap_is_deterministic() {
    let p = validate_rho(1.0, 0.25, 4.0).unwrap();
    let s = sample_twcc(300, &p, RngState::new(4, 0));
    let cfg = FitConfig { n_starts: 5, bootstrap: 20, seed: 9, ..FitConfig::default() };
    let f = fit_mle(&s, &cfg).unwrap();
    let a = bootstrap_ci(&s, &f, &cfg).unwrap();
    let b = bootstrap_ci(&s, &f, &cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.replicates, 20);
    for k in 0..3 {
        assert!(a.lower[k] <= a.median[k] && a.median[k] <= a.upper[k]);
    }
}
