//! Conditional densities. Every axis has a uniform marginal, so conditioning
//! reduces to rescaling and, for a single free angle, to a wrapped Cauchy law.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::{real_arg, wrapped_cauchy_pdf, TwccDensity, WrappedCauchyParams};
use crate::params::{others, PairwisePhi, RhoParams};

fn assemble(k: usize, ui: f64, uj: f64, uk: f64) -> [f64; 3] {
    let (i, j) = others(k);
    let mut u = [0.0; 3];
    u[i] = ui;
    u[j] = uj;
    u[k] = uk;
    u
}

/// Density of the free pair `(u_i, u_j)` given `U_k = u_k`; `(i, j)` are the
/// axes other than `k` in increasing order. Equals `2 pi t(u)`.
pub fn conditional_pair_given_one(ui: f64, uj: f64, uk: f64, k: usize, p: &RhoParams) -> f64 {
    let d = TwccDensity::new(p).expect("validated parameters");
    TAU * d.pdf_raw(&assemble(k, ui, uj, uk))
}

/// Same density written with the cosine of `u_i - u_j` expanded about `u_k`.
pub fn conditional_pair_given_one_expanded(ui: f64, uj: f64, uk: f64, k: usize, p: &RhoParams) -> f64 {
    let (i, j) = others(k);
    let (r_ij, r_ik, r_jk) = (p.between(i, j), p.between(i, k), p.between(j, k));
    let (a, b) = (ui - uk, uj - uk);
    let d = TwccDensity::new(p).expect("validated parameters");
    let bracket = r_ik * a.cos() + r_jk * b.cos() + r_ij * a.cos() * b.cos() + r_ij * a.sin() * b.sin();
    TAU * d.c2() / (d.c1() + 2.0 * bracket)
}

/// Location/concentration of `U_b` given `U_a = u_a` for the marginal pair `f`.
pub fn conditional_one_given_one_params(ua: f64, f: &PairwisePhi) -> WrappedCauchyParams {
    WrappedCauchyParams::new(ua + real_arg(f.varphi), f.varphi.abs())
        .expect("unit-disc representative of a valid marginal")
}

/// Density of `U_i` at `ui` given `U_j = uj`, for the marginal pair `f` of `(i, j)`.
pub fn conditional_one_given_one(ui: f64, uj: f64, f: &PairwisePhi) -> f64 {
    wrapped_cauchy_pdf(ui, &conditional_one_given_one_params(uj, f))
}

/// `phi_{i|jk} = -rho_jk (e^{i u_j} / rho_ik + e^{i u_k} / rho_ij)` where
/// `(j, k)` are the axes other than `i` in increasing order.
pub fn conditional_phi_given_two(uj: f64, uk: f64, p: &RhoParams, i: usize) -> Complex64 {
    let (j, k) = others(i);
    let (r_ij, r_ik, r_jk) = (p.between(i, j), p.between(i, k), p.between(j, k));
    -(Complex64::from_polar(1.0 / r_ik, uj) + Complex64::from_polar(1.0 / r_ij, uk)) * r_jk
}

/// Wrapped Cauchy parameters of `U_i` given the other two angles.
///
/// On the dominant axis the concentration is below one. On the other axes it
/// may exceed one, in which case the canonical reciprocal is stored.
pub fn conditional_params_given_two(uj: f64, uk: f64, p: &RhoParams, i: usize) -> WrappedCauchyParams {
    let w = conditional_phi_given_two(uj, uk, p, i);
    WrappedCauchyParams::from_complex(w).expect("concentration never equals one on the valid region")
}

/// Density of `U_i` at `ui` given the other two angles.
pub fn conditional_one_given_two(ui: f64, uj: f64, uk: f64, p: &RhoParams, i: usize) -> f64 {
    wrapped_cauchy_pdf(ui, &conditional_params_given_two(uj, uk, p, i))
}
