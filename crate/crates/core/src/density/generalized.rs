//! The trivariate density with the offset `C1` freed from its closed form.
//! Normalization uses the complete elliptic integral of the first kind.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::cos_sum;
use crate::angles::AnglePoint3;
use crate::error::{Result, TwccError};
use crate::numerics::elliptic_k_param;
use crate::params::{others, RhoParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedParams {
    pub rho: RhoParams,
    pub c1_free: f64,
    c2_free: f64,
}

/// Smallest legal `C1` on the dominant branch: `2 (|rho_ij| + |rho_ik| - |rho_jk|)`.
pub fn c1_lower_bound(p: &RhoParams) -> f64 {
    let i = p.dominant();
    let (j, k) = others(i);
    2.0 * (p.between(i, j).abs() + p.between(i, k).abs() - p.between(j, k).abs())
}

impl GeneralizedParams {
    pub fn new(rho: RhoParams, c1_free: f64) -> Result<GeneralizedParams> {
        if !c1_free.is_finite() {
            return Err(TwccError::NonFinite { name: "C1", value: c1_free });
        }
        let bound = c1_lower_bound(&rho);
        if !(c1_free > bound) {
            return Err(TwccError::IllegalC1 { c1: c1_free, bound });
        }
        let c2_free = generalized_c2(&rho, c1_free)?;
        Ok(GeneralizedParams { rho, c1_free, c2_free })
    }

    pub fn c2(&self) -> f64 {
        self.c2_free
    }

    #[inline]
    pub fn pdf_raw(&self, u: &[f64; 3]) -> f64 {
        self.c2_free / (self.c1_free + 2.0 * cos_sum(&self.rho.as_array(), u))
    }
}

/// `C2 = alpha2 / ((4 pi)^2 K(k))` with `k^2 = (alpha1 + alpha2^2 / 2) / alpha2^2`.
///
/// `k^2` is negative for `C1` below its closed-form value; `K` is then
/// evaluated at an imaginary modulus.
pub fn generalized_c2(p: &RhoParams, c1_free: f64) -> Result<f64> {
    let [r12, r13, r23] = p.as_array();
    let h = c1_free / 2.0;
    let factors = [h + r12 + r13 + r23, h + r12 - r13 - r23, h + r13 - r12 - r23, h + r23 - r12 - r13];
    for (index, value) in factors.iter().copied().enumerate() {
        if !(value > 0.0) {
            return Err(TwccError::NegativeFactor { index, value });
        }
    }
    let alpha1 = -c1_free * c1_free / 2.0 + 2.0 * (r12 * r12 + r13 * r13 + r23 * r23);
    let alpha2 = 2.0 * factors.iter().product::<f64>().powf(0.25);
    let m = (alpha1 + alpha2 * alpha2 / 2.0) / (alpha2 * alpha2);
    let k = elliptic_k_param(m)?;
    Ok(alpha2 / (16.0 * PI * PI * k))
}

pub fn generalized_pdf(u: &AnglePoint3, g: &GeneralizedParams) -> f64 {
    g.pdf_raw(&u.u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{c1, c2};
    use crate::params::validate_rho;

    #[test]
    fn reduces_to_closed_form() {
        for r in [[1.0, 0.25, 4.0], [0.611, -1.31, -1.25], [1.0, -4.0, -0.25]] {
            let p = validate_rho(r[0], r[1], r[2]).unwrap();
            let g = GeneralizedParams::new(p, c1(&p)).unwrap();
            let want = c2(&p).unwrap();
            assert!((g.c2() - want).abs() <= 1e-10 * want, "{} vs {}", g.c2(), want);
        }
    }

    #[test]
    fn illegal_offset() {
        let p = validate_rho(1.0, 0.25, 4.0).unwrap();
        let bound = c1_lower_bound(&p);
        assert!((bound - 2.0 * (1.0 + 4.0 - 0.25)).abs() < 1e-12);
        assert!(matches!(GeneralizedParams::new(p, bound), Err(TwccError::IllegalC1 { .. })));
        assert!(GeneralizedParams::new(p, bound * 1.01).is_ok());
    }
}
