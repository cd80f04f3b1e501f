//! `d`-variate extension `t(u) ∝ 1 / (c4 + 2 sum_{a<b} rho_ab cos(u_a - u_b))`
//! for `3 <= d <= 5`, normalized numerically.

use std::sync::OnceLock;

use crate::error::{Result, TwccError};
use crate::numerics::{torus_quadrature, QuadratureSpec};

/// Largest number of grid points the normalization may use.
const MAX_GRID: usize = 1 << 28;

#[derive(Debug)]
pub struct MultiRho {
    d: usize,
    rho: Vec<Vec<f64>>,
    c4: f64,
    norm: OnceLock<Result<f64>>,
}

impl Clone for MultiRho {
    fn clone(&self) -> Self {
        let norm = OnceLock::new();
        if let Some(v) = self.norm.get() {
            let _ = norm.set(v.clone());
        }
        MultiRho { d: self.d, rho: self.rho.clone(), c4: self.c4, norm }
    }
}

impl MultiRho {
    /// `rho` is a symmetric `d x d` table (diagonal ignored). Requires
    /// `c4 > 2 sum_{a<b} |rho_ab|`, which keeps the denominator positive.
    pub fn new(rho: Vec<Vec<f64>>, c4: f64) -> Result<MultiRho> {
        let d = rho.len();
        if !(3..=5).contains(&d) {
            return Err(TwccError::DimensionTooLarge(d));
        }
        let mut bound = 0.0;
        for a in 0..d {
            if rho[a].len() != d {
                return Err(TwccError::InvalidArgument(format!("row {a} of the table has the wrong length")));
            }
            for b in a + 1..d {
                if !rho[a][b].is_finite() || (rho[a][b] - rho[b][a]).abs() > 1e-12 * rho[a][b].abs() {
                    return Err(TwccError::InvalidArgument(format!("entry ({a}, {b}) is not symmetric/finite")));
                }
                bound += 2.0 * rho[a][b].abs();
            }
        }
        if !(c4 > bound * (1.0 + 1e-12)) {
            return Err(TwccError::DenominatorNonpositive { c4, bound });
        }
        Ok(MultiRho { d, rho, c4, norm: OnceLock::new() })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Unnormalized kernel.
    pub fn kernel(&self, u: &[f64]) -> f64 {
        let mut s = 0.0;
        for a in 0..self.d {
            for b in a + 1..self.d {
                s += self.rho[a][b] * (u[a] - u[b]).cos();
            }
        }
        1.0 / (self.c4 + 2.0 * s)
    }

    /// Multiplier turning [`MultiRho::kernel`] into a density; computed on
    /// first use and cached.
    pub fn normalizing_constant(&self) -> Result<f64> {
        self.norm
            .get_or_init(|| {
                let mut doublings = 0;
                while (16usize << (doublings + 1)).pow(self.d as u32) <= MAX_GRID {
                    doublings += 1;
                }
                let spec = QuadratureSpec::new(self.d).with_rel_tol(1e-7).with_max_doublings(doublings);
                let r = torus_quadrature(|u: &[f64]| self.kernel(u), spec)?.require()?;
                Ok(1.0 / r.value)
            })
            .clone()
    }
}

pub fn multivariate_pdf(u: &[f64], m: &MultiRho) -> Result<f64> {
    if u.len() != m.d {
        return Err(TwccError::InvalidArgument(format!("expected {} angles, got {}", m.d, u.len())));
    }
    Ok(m.normalizing_constant()? * m.kernel(u))
}
