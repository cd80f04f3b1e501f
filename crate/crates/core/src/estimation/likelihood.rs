//! Log-likelihood `n log c2 - sum log F_m` with
//! `F_m = c1 + 2 sum rho_ab cos(u_ma - u_mb)`, and its gradient.

use crate::angles::AngleSample;
use crate::density::{c1, c2, c4};
use crate::params::RhoParams;

/// The three monomials `rho12 rho13 / rho23`, `rho12 rho23 / rho13`,
/// `rho13 rho23 / rho12` whose sum is `c1`, as exponent vectors.
pub(crate) const C1_TERMS: [[i32; 3]; 3] = [[1, 1, -1], [1, -1, 1], [-1, 1, 1]];

fn monomial(rho: &[f64; 3], e: &[i32; 3]) -> f64 {
    rho[0].powi(e[0]) * rho[1].powi(e[1]) * rho[2].powi(e[2])
}

/// Gradient and Hessian of `c1` in `rho`.
pub(crate) fn c1_derivs(rho: &[f64; 3]) -> ([f64; 3], [[f64; 3]; 3]) {
    let mut g = [0.0; 3];
    let mut h = [[0.0; 3]; 3];
    for e in &C1_TERMS {
        let m = monomial(rho, e);
        for a in 0..3 {
            g[a] += e[a] as f64 * m / rho[a];
            for b in 0..3 {
                let coef = if a == b { e[a] * (e[a] - 1) } else { e[a] * e[b] };
                h[a][b] += coef as f64 * m / (rho[a] * rho[b]);
            }
        }
    }
    (g, h)
}

/// Gradient and Hessian of the radicand `c4 = sum m_t^2 - 2 sum rho^2`.
pub(crate) fn c4_derivs(rho: &[f64; 3]) -> ([f64; 3], [[f64; 3]; 3]) {
    let mut g = [0.0; 3];
    let mut h = [[0.0; 3]; 3];
    for e1 in &C1_TERMS {
        let e = e1.map(|v| 2 * v);
        let m = monomial(rho, &e);
        for a in 0..3 {
            g[a] += e[a] as f64 * m / rho[a];
            for b in 0..3 {
                let coef = if a == b { e[a] * (e[a] - 1) } else { e[a] * e[b] };
                h[a][b] += coef as f64 * m / (rho[a] * rho[b]);
            }
        }
    }
    for a in 0..3 {
        g[a] -= 4.0 * rho[a];
        h[a][a] -= 4.0;
    }
    (g, h)
}

/// Per-row cosines `(cos(u1-u2), cos(u1-u3), cos(u2-u3))`, computed once so
/// that repeated likelihood evaluations cost no trigonometry.
#[derive(Debug, Clone)]
pub struct SampleCosines {
    cos: Vec<[f64; 3]>,
}

impl SampleCosines {
    pub fn new(s: &AngleSample) -> SampleCosines {
        let cos = s
            .rows()
            .iter()
            .map(|u| [(u[0] - u[1]).cos(), (u[0] - u[2]).cos(), (u[1] - u[2]).cos()])
            .collect();
        SampleCosines { cos }
    }

    pub fn len(&self) -> usize {
        self.cos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cos.is_empty()
    }

    /// Mean log-likelihood and its gradient in `rho`, for any triple with a
    /// positive radicand. `None` if some `F_m` is not positive.
    pub fn mean_loglik_grad(&self, rho: &[f64; 3]) -> Option<(f64, [f64; 3])> {
        let [r12, r13, r23] = *rho;
        let a = r12 * r13 / r23;
        let b = r12 * r23 / r13;
        let c = r13 * r23 / r12;
        let k1 = a + b + c;
        let k4 = a * a + b * b + c * c - 2.0 * (r12 * r12 + r13 * r13 + r23 * r23);
        if !(k4 > 0.0) {
            return None;
        }
        let (mut sl, mut s0, mut s) = (0.0, 0.0, [0.0; 3]);
        for cm in &self.cos {
            let f = k1 + 2.0 * (r12 * cm[0] + r13 * cm[1] + r23 * cm[2]);
            if !(f > 0.0) {
                return None;
            }
            let inv = 1.0 / f;
            sl += f.ln();
            s0 += inv;
            s[0] += cm[0] * inv;
            s[1] += cm[1] * inv;
            s[2] += cm[2] * inv;
        }
        let n = self.cos.len() as f64;
        let value = 0.5 * k4.ln() - 3.0 * std::f64::consts::TAU.ln() - sl / n;
        let (g1, _) = c1_derivs(rho);
        let (g4, _) = c4_derivs(rho);
        let grad = [0, 1, 2].map(|q| 0.5 * g4[q] / k4 - g1[q] * s0 / n - 2.0 * s[q] / n);
        Some((value, grad))
    }
}

/// `sum_m log t(u_m; rho)`.
pub fn log_likelihood(s: &AngleSample, p: &RhoParams) -> f64 {
    let rho = p.as_array();
    let k1 = c1(p);
    let k2 = c2(p).expect("validated parameters");
    let n = s.len() as f64;
    let sum_ln_f: f64 = s
        .rows()
        .iter()
        .map(|u| {
            (k1 + 2.0 * (rho[0] * (u[0] - u[1]).cos() + rho[1] * (u[0] - u[2]).cos() + rho[2] * (u[1] - u[2]).cos()))
                .ln()
        })
        .sum();
    n * k2.ln() - sum_ln_f
}

/// Analytic gradient of [`log_likelihood`] in `(rho12, rho13, rho23)`:
/// `n dc4 / (2 c4) - sum_m (dc1 + 2 cos_m) / F_m`.
pub fn score(s: &AngleSample, p: &RhoParams) -> [f64; 3] {
    let rho = p.as_array();
    let k1 = c1(p);
    let k4 = c4(p);
    let (g1, _) = c1_derivs(&rho);
    let (g4, _) = c4_derivs(&rho);
    let n = s.len() as f64;
    let mut out = [0.5 * n * g4[0] / k4, 0.5 * n * g4[1] / k4, 0.5 * n * g4[2] / k4];
    for u in s.rows() {
        let cs = [(u[0] - u[1]).cos(), (u[0] - u[2]).cos(), (u[1] - u[2]).cos()];
        let f = k1 + 2.0 * (rho[0] * cs[0] + rho[1] * cs[1] + rho[2] * cs[2]);
        for q in 0..3 {
            out[q] -= (g1[q] + 2.0 * cs[q]) / f;
        }
    }
    out
}
