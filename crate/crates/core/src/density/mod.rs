//! Densities of the trivariate wrapped Cauchy copula and its building blocks.

pub mod conditional;
pub mod generalized;
pub mod multivariate;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angles::{reduce_angle, AnglePoint3};
use crate::error::{Result, TwccError};
use crate::params::{PairwisePhi, PhiTriple, RhoParams};

pub use conditional::{
    conditional_one_given_one, conditional_one_given_two, conditional_pair_given_one,
    conditional_pair_given_one_expanded, conditional_params_given_two,
};
pub use generalized::{generalized_pdf, GeneralizedParams};
pub use multivariate::{multivariate_pdf, MultiRho};

/// `(2 pi)^3`.
pub(crate) const TAU3: f64 = TAU * TAU * TAU;

/// `c1 = rho12 rho13 / rho23 + rho12 rho23 / rho13 + rho13 rho23 / rho12`.
pub fn c1(p: &RhoParams) -> f64 {
    let [r12, r13, r23] = p.as_array();
    r12 * r13 / r23 + r12 * r23 / r13 + r13 * r23 / r12
}

/// The radicand `c4` with `c2 = c4^(1/2) / (2 pi)^3`.
pub fn c4(p: &RhoParams) -> f64 {
    let [r12, r13, r23] = p.as_array();
    let a = r12 * r13 / r23;
    let b = r12 * r23 / r13;
    let c = r13 * r23 / r12;
    a * a + b * b + c * c - 2.0 * (r12 * r12 + r13 * r13 + r23 * r23)
}

/// Normalizing constant `c2`.
pub fn c2(p: &RhoParams) -> Result<f64> {
    let r = c4(p);
    if !(r > 0.0) {
        return Err(TwccError::NegativeRadicand(r));
    }
    Ok(r.sqrt() / TAU3)
}

/// Weighted cosine sum `rho12 cos(u1-u2) + rho13 cos(u1-u3) + rho23 cos(u2-u3)`.
#[inline]
pub(crate) fn cos_sum(rho: &[f64; 3], u: &[f64; 3]) -> f64 {
    rho[0] * (u[0] - u[1]).cos() + rho[1] * (u[0] - u[2]).cos() + rho[2] * (u[1] - u[2]).cos()
}

/// The trivariate density with its constants evaluated once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwccDensity {
    rho: [f64; 3],
    c1: f64,
    c2: f64,
}

impl TwccDensity {
    pub fn new(p: &RhoParams) -> Result<TwccDensity> {
        Ok(TwccDensity { rho: p.as_array(), c1: c1(p), c2: c2(p)? })
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    /// Density at raw angles (no reduction needed; the kernel is periodic).
    #[inline]
    pub fn pdf_raw(&self, u: &[f64; 3]) -> f64 {
        self.c2 / (self.c1 + 2.0 * cos_sum(&self.rho, u))
    }

    pub fn pdf(&self, u: &AnglePoint3) -> f64 {
        self.pdf_raw(&u.u)
    }

    #[inline]
    pub fn ln_pdf_raw(&self, u: &[f64; 3]) -> f64 {
        self.pdf_raw(u).ln()
    }
}

/// Trivariate density `c2 / (c1 + 2 sum rho_ab cos(u_a - u_b))`.
pub fn twcc_pdf(u: &AnglePoint3, p: &RhoParams) -> f64 {
    TwccDensity::new(p).expect("validated parameters have a positive radicand").pdf(u)
}

/// Formula evaluation without any validity check, for identities that leave
/// the parameter space (such as `rho -> -rho`).
pub fn twcc_formula(u: &[f64; 3], rho: [f64; 3]) -> f64 {
    let [r12, r13, r23] = rho;
    let a = r12 * r13 / r23;
    let b = r12 * r23 / r13;
    let c = r13 * r23 / r12;
    let rad = a * a + b * b + c * c - 2.0 * (r12 * r12 + r13 * r13 + r23 * r23);
    rad.sqrt() / TAU3 / (a + b + c + 2.0 * cos_sum(&rho, u))
}

/// Complex form `c2 / |phi1 z1 + phi2 z2 + phi3 z3|^2` with `c2` written in
/// terms of the squared weights.
pub fn twcc_pdf_complex(z: [Complex64; 3], q: &PhiTriple) -> f64 {
    let [f1, f2, f3] = q.as_array();
    let (a, b, c) = (f1 * f1, f2 * f2, f3 * f3);
    let rad = a * a + b * b + c * c - 2.0 * (a * b + a * c + b * c);
    let w = z[0] * f1 + z[1] * f2 + z[2] * f3;
    rad.sqrt() / TAU3 / w.norm_sqr()
}

/// Bivariate marginal `(1 / 4pi^2) |1 - phi^2| / (1 + phi^2 - 2 phi cos(ui - uj))`.
pub fn bivariate_marginal_pdf(ui: f64, uj: f64, f: &PairwisePhi) -> f64 {
    let phi = f.phi;
    (1.0 - phi * phi).abs() / (TAU * TAU * (1.0 + phi * phi - 2.0 * phi * (ui - uj).cos()))
}

/// Limit of the density as `|rho12|` grows with `rho13`, `rho23` fixed:
/// `U3` uniform and independent of a bivariate wrapped Cauchy pair `(U1, U2)`.
pub fn limit_density(u: &[f64; 3], rho2313: f64) -> f64 {
    let r = rho2313;
    (1.0 - r * r) / (TAU3 * (1.0 + r * r + 2.0 * r * (u[0] - u[1]).cos()))
}

/// Wrapped Cauchy location and concentration.
///
/// `delta` is kept in canonical form `[0, 1)`; a concentration above one is
/// replaced by its reciprocal (the density is unchanged) and the value given
/// by the caller is kept in `original_delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WrappedCauchyParams {
    pub eta: f64,
    pub delta: f64,
    pub original_delta: f64,
}

impl WrappedCauchyParams {
    pub fn new(eta: f64, delta: f64) -> Result<WrappedCauchyParams> {
        if !eta.is_finite() {
            return Err(TwccError::NonFinite { name: "eta", value: eta });
        }
        if !(delta >= 0.0) || delta == 1.0 || !delta.is_finite() {
            return Err(TwccError::UnitConcentration(delta));
        }
        let canonical = if delta > 1.0 { 1.0 / delta } else { delta };
        Ok(WrappedCauchyParams { eta: reduce_angle(eta), delta: canonical, original_delta: delta })
    }

    /// From a point `w` of the complex plane: location `arg w`, concentration `|w|`.
    pub fn from_complex(w: Complex64) -> Result<WrappedCauchyParams> {
        WrappedCauchyParams::new(w.arg(), w.norm())
    }

    /// First trigonometric moment `delta e^{i eta}`.
    pub fn mean_resultant(&self) -> Complex64 {
        Complex64::from_polar(self.delta, self.eta)
    }
}

/// `(1 / 2pi) (1 - delta^2) / (1 + delta^2 - 2 delta cos(theta - eta))`.
pub fn wrapped_cauchy_pdf(theta: f64, w: &WrappedCauchyParams) -> f64 {
    let d = w.delta;
    (1.0 - d * d) / (TAU * (1.0 + d * d - 2.0 * d * (theta - w.eta).cos()))
}

/// Principal argument of a real number: `0` if positive, `pi` if negative.
pub(crate) fn real_arg(x: f64) -> f64 {
    if x < 0.0 {
        PI
    } else {
        0.0
    }
}
