//! Trigonometric moments `E exp(i (p1 U1 + p2 U2 + p3 U3))`.
//!
//! The formulas are stated for the dominant axis `i` with `(j, k)` the other
//! two axes; a parameter whose dominant axis differs from the first one is
//! handled by relabelling.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::params::{others, Pair, Perm, RhoParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MomentOrder {
    pub p: [i32; 3],
}

impl MomentOrder {
    pub fn new(p1: i32, p2: i32, p3: i32) -> MomentOrder {
        MomentOrder { p: [p1, p2, p3] }
    }

    pub fn negated(&self) -> MomentOrder {
        MomentOrder { p: self.p.map(|v| -v) }
    }

    pub fn sum(&self) -> i32 {
        self.p.iter().sum()
    }
}

/// Which closed form produced a moment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MomentCase {
    /// Orders do not sum to zero; the moment vanishes.
    NonzeroSum,
    /// Binomial sum over `n = 0..=p_i`.
    GeneralSum,
    /// Closed product form for `p_j >= 0`.
    SimplifiedUpper,
    /// Closed product form for `p_j <= -p_i`.
    SimplifiedLower,
    /// `p_i < 0`, evaluated at the negated order.
    Reflected,
    /// `p_i = 0`: a power of the marginal parameter of `(j, k)`.
    DominantZero,
}

fn binomial(n: i32, k: i32) -> f64 {
    (0..k).fold(1.0, |acc, m| acc * (n - m) as f64 / (m + 1) as f64)
}

/// Ingredients `(rho_ij, rho_ik, rho_jk, varphi_jk)` for the dominant axis.
fn pieces(p: &RhoParams) -> (Perm, f64, f64, f64, f64) {
    let i = p.dominant();
    let (j, k) = others(i);
    let perm = Perm { i, j, k };
    let varphi = p.pairwise_phi(Pair::from_axes(j, k).unwrap()).varphi;
    (perm, p.between(i, j), p.between(i, k), p.between(j, k), varphi)
}

/// Binomial-sum form, valid whenever the orders sum to zero and `p_i >= 0`.
pub fn trig_moment_general_sum(o: MomentOrder, p: &RhoParams) -> f64 {
    let (perm, r_ij, r_ik, r_jk, varphi) = pieces(p);
    let (pi, pj) = (o.p[perm.i], o.p[perm.j]);
    let mut s = 0.0;
    for n in 0..=pi {
        s += binomial(pi, n) * r_ik.powi(-n) * r_ij.powi(-pi + n) * varphi.powi((pj + n).abs());
    }
    (-r_jk).powi(pi) * s
}

/// Moment together with the form used to evaluate it. Moments are real.
pub fn trig_moment_with_case(o: MomentOrder, p: &RhoParams) -> (f64, MomentCase) {
    if o.sum() != 0 {
        return (0.0, MomentCase::NonzeroSum);
    }
    let (perm, r_ij, r_ik, r_jk, varphi) = pieces(p);
    let (pi, pj) = (o.p[perm.i], o.p[perm.j]);
    if pi == 0 {
        return (varphi.powi(pj.abs()), MomentCase::DominantZero);
    }
    if pi < 0 {
        let (v, _) = trig_moment_with_case(o.negated(), p);
        return (v, MomentCase::Reflected);
    }
    if pj >= 0 {
        let v = varphi.powi(pj) * (-r_jk * (varphi / r_ik + 1.0 / r_ij)).powi(pi);
        (v, MomentCase::SimplifiedUpper)
    } else if pj <= -pi {
        let v = varphi.powi(-pj) * (-r_jk * (1.0 / (varphi * r_ik) + 1.0 / r_ij)).powi(pi);
        (v, MomentCase::SimplifiedLower)
    } else {
        (trig_moment_general_sum(o, p), MomentCase::GeneralSum)
    }
}

pub fn trig_moment(o: MomentOrder, p: &RhoParams) -> Complex64 {
    Complex64::new(trig_moment_with_case(o, p).0, 0.0)
}

/// Johnson-Wehrly, Jupp-Mardia and Fisher-Lee correlations of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrCoefficients {
    pub jw: f64,
    pub jm: f64,
    pub fl: f64,
}

pub fn corr_coefficients(p: &RhoParams, pair: Pair) -> CorrCoefficients {
    let v = p.pairwise_phi(pair).varphi;
    CorrCoefficients { jw: v.abs(), jm: 2.0 * v * v, fl: v * v }
}
