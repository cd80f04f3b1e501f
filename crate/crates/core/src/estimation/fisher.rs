//! Expected Fisher information per observation, by torus quadrature of the
//! analytic second derivatives of `log t`.

use nalgebra::{Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::likelihood::{c1_derivs, c4_derivs};
use crate::density::{c4, TwccDensity};
use crate::error::Result;
use crate::numerics::{torus_quadrature, QuadratureSpec};
use crate::params::RhoParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherInfo {
    pub matrix: [[f64; 3]; 3],
    /// Number of observations the matrix refers to.
    pub n: f64,
    pub quadrature_points: usize,
}

impl FisherInfo {
    /// Information of `n` observations.
    pub fn scaled(&self, n: f64) -> FisherInfo {
        let k = n / self.n;
        FisherInfo { matrix: self.matrix.map(|r| r.map(|v| v * k)), n, ..*self }
    }

    /// Eigenvalues in increasing order.
    pub fn eigenvalues(&self) -> [f64; 3] {
        let m = Matrix3::from_fn(|a, b| self.matrix[a][b]);
        let mut e: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        e.sort_by(f64::total_cmp);
        [e[0], e[1], e[2]]
    }

    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                worst = worst.max((self.matrix[a][b] - self.matrix[b][a]).abs());
            }
        }
        worst
    }
}

const UPPER: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

/// `I_ab = -(1/2) (c4_ab / c4 - c4_a c4_b / c4^2) + E[c1_ab / F - F_a F_b / F^2]`
/// with `F = c1 + 2 sum rho cos` and `F_a = c1_a + 2 cos_a`.
///
/// The information is singular along `rho` itself (the density is scale
/// invariant), so the smallest eigenvalue is zero up to quadrature error.
pub fn fisher_information(p: &RhoParams) -> Result<FisherInfo> {
    let rho = p.as_array();
    let dens = TwccDensity::new(p)?;
    let k1 = dens.c1();
    let k4 = c4(p);
    let (g1, h1) = c1_derivs(&rho);
    let (g4, h4) = c4_derivs(&rho);
    let integrand = |u: &[f64]| -> [f64; 6] {
        let cs = [(u[0] - u[1]).cos(), (u[0] - u[2]).cos(), (u[1] - u[2]).cos()];
        let f = k1 + 2.0 * (rho[0] * cs[0] + rho[1] * cs[1] + rho[2] * cs[2]);
        let t = dens.c2() / f;
        let fa = [g1[0] + 2.0 * cs[0], g1[1] + 2.0 * cs[1], g1[2] + 2.0 * cs[2]];
        UPPER.map(|(a, b)| t * (h1[a][b] / f - fa[a] * fa[b] / (f * f)))
    };
    let spec = QuadratureSpec::new(3).with_rel_tol(1e-9).with_abs_tol(1e-13).with_max_doublings(5);
    let r = torus_quadrature(integrand, spec)?.require()?;
    let mut m = [[0.0; 3]; 3];
    for (q, &(a, b)) in UPPER.iter().enumerate() {
        let v = -0.5 * (h4[a][b] / k4 - g4[a] * g4[b] / (k4 * k4)) + r.value[q];
        m[a][b] = v;
        m[b][a] = v;
    }
    Ok(FisherInfo { matrix: m, n: 1.0, quadrature_points: r.points })
}
