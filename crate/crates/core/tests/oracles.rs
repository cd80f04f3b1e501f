//! Closed forms checked against quadrature and Monte Carlo.

mod common;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use twcc::analytics::{corr_coefficients, trig_moment, MomentOrder};
use twcc::density::conditional::{
    conditional_one_given_one, conditional_one_given_two, conditional_pair_given_one,
};
use twcc::density::{
    bivariate_marginal_pdf, limit_density, multivariate_pdf, twcc_pdf, wrapped_cauchy_pdf, MultiRho, TwccDensity,
    WrappedCauchyParams,
};
use twcc::estimation::{empirical_trig_moment, fisher_information, log_likelihood};
use twcc::numerics::{torus_quadrature, trapezoid_fixed, QuadratureSpec};
use twcc::params::{from_star, validate_rho, Pair, RhoParams, StarParams};
use twcc::sampler::{sample_twcc, RngState};
use twcc::AnglePoint3;

fn pdf(p: &RhoParams) -> impl Fn(&[f64]) -> f64 + Sync + '_ {
    let d = TwccDensity::new(p).unwrap();
    move |u: &[f64]| d.pdf_raw(&[u[0], u[1], u[2]])
}

/// Periodic trapezoid rule with `n` nodes.
fn integrate_1d(f: impl Fn(f64) -> f64, n: usize) -> f64 {
    let h = TAU / n as f64;
    (0..n).map(|m| f(m as f64 * h)).sum::<f64>() * h
}

#[test]
fn marginal_parameter_is_the_mean_resultant_of_the_difference() {
    let p = validate_rho(1.0, 0.25, 4.0).unwrap();
    let f = pdf(&p);
    let m: Complex64 = torus_quadrature(
        |u: &[f64]| Complex64::from_polar(f(u), u[0] - u[1]),
        QuadratureSpec::new(3).with_rel_tol(1e-10).with_max_doublings(5),
    )
    .unwrap()
    .require()
    .unwrap()
    .value;
    // wrapped Cauchy law of U1 - U2 has mean resultant delta e^{i eta}
    let v = p.pairwise_phi(Pair::P12).varphi;
    assert!((m.re - v).abs() < 1e-6 && m.im.abs() < 1e-9, "{m} vs {v}");
}

#[test]
fn marginal_parameters_match_simulation() {
    let p = validate_rho(0.611, -1.31, -1.25).unwrap();
    let n = 200_000;
    let s = sample_twcc(n, &p, RngState::new(11, 0));
    for (pair, o) in [(Pair::P12, [1, -1, 0]), (Pair::P13, [1, 0, -1]), (Pair::P23, [0, 1, -1])] {
        let e = empirical_trig_moment(&s, MomentOrder { p: o });
        let v = p.pairwise_phi(pair).varphi;
        assert!((e.re - v).abs() < 4.0 / (n as f64).sqrt(), "{pair:?}: {e} vs {v}");
    }
}

#[test]
fn bivariate_marginal_integrates_and_matches() {
    for r in [[1.0, 0.25, 4.0], [0.611, -1.31, -1.25]] {
        let p = validate_rho(r[0], r[1], r[2]).unwrap();
        for pair in Pair::ALL {
            let f = p.pairwise_phi(pair);
            let total: f64 = torus_quadrature(
                |u: &[f64]| bivariate_marginal_pdf(u[0], u[1], &f),
                QuadratureSpec::new(2).with_rel_tol(1e-13).with_max_doublings(8),
            )
            .unwrap()
            .value;
            assert!((total - 1.0).abs() < 1e-10);
            let (a, b) = pair.axes();
            let c = pair.complement();
            let d = TwccDensity::new(&p).unwrap();
            for gi in 0..8 {
                for gj in 0..8 {
                    let (x, y) = (gi as f64 * 0.8, gj as f64 * 0.8);
                    let inner = integrate_1d(
                        |t| {
                            let mut u = [0.0; 3];
                            u[a] = x;
                            u[b] = y;
                            u[c] = t;
                            d.pdf_raw(&u)
                        },
                        512,
                    );
                    assert!((inner - bivariate_marginal_pdf(x, y, &f)).abs() < 1e-8);
                }
            }
        }
    }
}

#[test]
fn wrapped_cauchy_normalizes() {
    let w = WrappedCauchyParams::new(1.0, 0.7).unwrap();
    assert!((integrate_1d(|t| wrapped_cauchy_pdf(t, &w), 1024) - 1.0).abs() < 1e-12);
}

#[test]
fn conditionals_normalize_and_match_slices() {
    let p = validate_rho(0.611, -1.31, -1.25).unwrap();
    for k in 0..3 {
        let v: f64 = trapezoid_fixed(&|u: &[f64]| conditional_pair_given_one(u[0], u[1], 0.0, k, &p), 2, 256);
        assert!((v - 1.0).abs() < 1e-8, "k={k}: {v}");
    }
    let f = p.pairwise_phi(Pair::P13);
    assert!((integrate_1d(|t| conditional_one_given_one(1.0, t, &f), 1024) - 1.0).abs() < 1e-12);
    let d = TwccDensity::new(&p).unwrap();
    for i in 0..3 {
        for (uj, uk) in [(0.0, 0.0), (1.0, 4.0), (5.5, 2.2)] {
            let at = |t: f64| {
                let (j, k) = twcc::params::others(i);
                let mut u = [0.0; 3];
                u[i] = t;
                u[j] = uj;
                u[k] = uk;
                u
            };
            let total = integrate_1d(|t| conditional_one_given_two(t, uj, uk, &p, i), 1024);
            assert!((total - 1.0).abs() < 1e-12);
            let norm = integrate_1d(|t| d.pdf_raw(&at(t)), 1024);
            for t in [0.1, 1.9, 3.3, 6.0] {
                let slice = d.pdf_raw(&at(t)) / norm;
                assert!((slice - conditional_one_given_two(t, uj, uk, &p, i)).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn moment_two_minus_one_minus_one() {
    let p = validate_rho(1.0, 0.25, 4.0).unwrap();
    let f = pdf(&p);
    let q: Complex64 = torus_quadrature(
        |u: &[f64]| Complex64::from_polar(f(u), 2.0 * u[0] - u[1] - u[2]),
        QuadratureSpec::new(3).with_rel_tol(1e-10).with_abs_tol(1e-12).with_max_doublings(5),
    )
    .unwrap()
    .value;
    let c = trig_moment(MomentOrder::new(2, -1, -1), &p);
    assert!((q - c).norm() < 1e-7, "{q} vs {c}");
}

#[test]
fn fisher_lee_from_its_determinant_definition() {
    let p = validate_rho(1.0, 0.25, 4.0).unwrap();
    let f = pdf(&p);
    // E[x y^T] with x = (cos U2, sin U2), y = (cos U3, sin U3)
    let m: [f64; 4] = trapezoid_fixed(
        &|u: &[f64]| {
            let t = f(u);
            let (c2, s2, c3, s3) = (u[1].cos(), u[1].sin(), u[2].cos(), u[2].sin());
            [t * c2 * c3, t * c2 * s3, t * s2 * c3, t * s2 * s3]
        },
        3,
        128,
    );
    // uniform marginals give E[x x^T] = E[y y^T] = I / 2
    let fl = (m[0] * m[3] - m[1] * m[2]) / 0.25;
    let c = corr_coefficients(&p, Pair::P23);
    assert!((fl - c.fl).abs() < 1e-6, "{fl} vs {}", c.fl);
    assert!((c.jm - 2.0 * c.fl).abs() < 1e-15 && (c.fl - c.jw * c.jw).abs() < 1e-15);
}

#[test]
fn negative_pattern_modes_from_grid() {
    // rho12 > 0 small, rho13, rho23 < 0: mode u1 = u2 = u3, antimode u3 opposite
    let p = validate_rho(0.2, -2.0, -2.5).unwrap();
    let d = TwccDensity::new(&p).unwrap();
    let n = 64;
    let h = TAU / n as f64;
    let (mut best, mut worst) = (([0usize; 3], f64::MIN), ([0usize; 3], f64::MAX));
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let v = d.pdf_raw(&[a as f64 * h, b as f64 * h, c as f64 * h]);
                if v > best.1 {
                    best = ([a, b, c], v);
                }
                if v < worst.1 {
                    worst = ([a, b, c], v);
                }
            }
        }
    }
    let [a, b, c] = best.0;
    assert!(a == b && b == c);
    let [a, b, c] = worst.0;
    assert!(a == b && (c + n / 2) % n == a);
}

#[test]
fn multivariate_three_dimensional_case_is_the_copula() {
    let p = validate_rho(1.0, 0.25, 4.0).unwrap();
    let r = p.as_array();
    let c1 = TwccDensity::new(&p).unwrap().c1();
    let m = MultiRho::new(vec![vec![0.0, r[0], r[1]], vec![r[0], 0.0, r[2]], vec![r[1], r[2], 0.0]], c1).unwrap();
    for u in [[0.0, 0.0, 0.0], [1.0, 2.0, 3.0], [0.0, PI, 0.0], [5.0, 0.3, 2.2]] {
        let a = multivariate_pdf(&u, &m).unwrap();
        let b = twcc_pdf(&AnglePoint3::from_array(u), &p);
        assert!((a - b).abs() < 1e-7 * b, "{a} vs {b}");
    }
}

#[test]
fn sampled_marginal_is_uniform_and_odd_moments_vanish() {
    let p = validate_rho(1.0, 0.25, 4.0).unwrap();
    let n = 100_000;
    let s = sample_twcc(n, &p, RngState::new(21, 0));
    let mut x: Vec<f64> = s.column(1).map(|v| v / TAU).collect();
    x.sort_by(f64::total_cmp);
    let (mut dp, mut dm) = (0.0f64, 0.0f64);
    for (m, v) in x.iter().enumerate() {
        dp = dp.max((m + 1) as f64 / n as f64 - v);
        dm = dm.max(v - m as f64 / n as f64);
    }
    // Kuiper's V: the 1% critical value of sqrt(n) V is about 2.0
    let v = (dp + dm) * (n as f64).sqrt();
    assert!(v < 2.0, "Kuiper statistic {v}");
    let e = empirical_trig_moment(&s, MomentOrder::new(1, 1, -1));
    assert!(e.norm() < 4.0 / (n as f64).sqrt());
    let v12 = empirical_trig_moment(&s, MomentOrder::new(1, -1, 0));
    let t12 = p.pairwise_phi(Pair::P12).varphi;
    assert!((v12.re - t12).abs() < 3.0 / (n as f64).sqrt());
}

#[test]
fn log_likelihood_follows_the_expectation() {
    let p = validate_rho(0.611, -1.31, -1.25).unwrap();
    let f = pdf(&p);
    let [el, el2]: [f64; 2] = trapezoid_fixed(
        &|u: &[f64]| {
            let t = f(u);
            [t * t.ln(), t * t.ln() * t.ln()]
        },
        3,
        128,
    );
    let n = 100_000;
    let s = sample_twcc(n, &p, RngState::new(5, 0));
    let sd = ((el2 - el * el) * n as f64).sqrt();
    let ll = log_likelihood(&s, &p);
    assert!((ll - n as f64 * el).abs() < 4.0 * sd, "{ll} vs {}", n as f64 * el);
    let scaled = log_likelihood(&s, &p.scaled(7.0).unwrap());
    assert!((scaled - ll).abs() < 1e-9 * ll.abs());
}

#[test]
fn fisher_matches_curvature_of_expected_log_likelihood() {
    let p0 = validate_rho(1.0, 0.25, 4.0).unwrap();
    let d0 = TwccDensity::new(&p0).unwrap();
    let n = 96;
    let h = TAU / n as f64;
    let mut grid = Vec::with_capacity(n * n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let u = [a as f64 * h, b as f64 * h, c as f64 * h];
                grid.push((u, d0.pdf_raw(&u) * h * h * h));
            }
        }
    }
    let expected = |r: [f64; 3]| -> f64 {
        let d = TwccDensity::new(&validate_rho(r[0], r[1], r[2]).unwrap()).unwrap();
        grid.iter().map(|(u, w)| w * d.ln_pdf_raw(u)).sum()
    };
    let r0 = p0.as_array();
    let step = [1e-3, 2.5e-4, 4e-3];
    let mut hess = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            let at = |sa: f64, sb: f64| {
                let mut r = r0;
                r[a] += sa * step[a];
                r[b] += sb * step[b];
                expected(r)
            };
            hess[a][b] = (at(1.0, 1.0) - at(1.0, -1.0) - at(-1.0, 1.0) + at(-1.0, -1.0)) / (4.0 * step[a] * step[b]);
        }
    }
    let info = fisher_information(&p0).unwrap().matrix;
    let scale = info.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    for a in 0..3 {
        for b in 0..3 {
            assert!((info[a][b] + hess[a][b]).abs() < 1e-4 * scale, "({a},{b}): {} vs {}", info[a][b], -hess[a][b]);
        }
    }
}

#[test]
fn limit_density_approached_monotonically() {
    let (r13, r23) = (-2.0, 0.2);
    let rho2313 = r23 / f64::abs(r13);
    let mut last = f64::INFINITY;
    for r12 in [-10.0, -100.0, -1000.0] {
        let p = validate_rho(r12, r13, r23).unwrap();
        let d = TwccDensity::new(&p).unwrap();
        let mut sup = 0.0f64;
        let n = 24;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let u = [a, b, c].map(|m| m as f64 * TAU / n as f64);
                    sup = sup.max((d.pdf_raw(&u) - limit_density(&u, rho2313)).abs());
                }
            }
        }
        assert!(sup < last, "{sup} after {last}");
        last = sup;
    }
    assert!(last < 1e-2);
}

#[test]
fn star_example_family() {
    let p = from_star(&StarParams { rho12_star: -5.0, rho2313_star: 0.1 }).unwrap();
    assert_eq!(p.dominant(), 0);
    assert!(p.rho23() > 0.0);
    assert!((p.rho23() / p.rho13().abs() - 0.1).abs() < 1e-12);
    assert!((p.product() - 1.0).abs() < 1e-12);
}
