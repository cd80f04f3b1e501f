//! Complete elliptic integral of the first kind.

use std::f64::consts::PI;

use crate::error::{Result, TwccError};

/// `K(alpha) = int_0^{pi/2} (1 - alpha^2 sin^2 t)^{-1/2} dt` by the
/// arithmetic-geometric mean, `K = pi / (2 AGM(1, sqrt(1 - alpha^2)))`.
pub fn elliptic_k(alpha: f64) -> Result<f64> {
    if !(alpha.abs() < 1.0) {
        return Err(TwccError::ModulusOutOfRange(alpha));
    }
    elliptic_k_param(alpha * alpha)
}

/// `K` as a function of the parameter `m = alpha^2`, valid for any `m < 1`
/// (negative `m` is an imaginary modulus).
pub fn elliptic_k_param(m: f64) -> Result<f64> {
    if !(m < 1.0) || !m.is_finite() {
        return Err(TwccError::ModulusOutOfRange(m.signum() * m.abs().sqrt()));
    }
    Ok(PI / (2.0 * agm(1.0, (1.0 - m).sqrt())))
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    0.5 * (a + b)
}

/// `K(alpha)` by direct trapezoidal quadrature of the defining integral.
///
/// The integrand is even and `pi`-periodic, so the equally spaced rule on a
/// full period converges geometrically. Independent of [`elliptic_k`].
pub fn elliptic_k_quadrature(alpha: f64) -> Result<f64> {
    if !(alpha.abs() < 1.0) {
        return Err(TwccError::ModulusOutOfRange(alpha));
    }
    let a2 = alpha * alpha;
    let rule = |n: usize| {
        let h = PI / n as f64;
        let s: f64 = (0..n)
            .map(|m| {
                let s = (m as f64 * h).sin();
                1.0 / (1.0 - a2 * s * s).sqrt()
            })
            .sum();
        s * h / 2.0
    };
    let mut n = 16;
    let mut prev = rule(n);
    while n < 1 << 20 {
        n *= 2;
        let next = rule(n);
        if (next - prev).abs() <= 1e-15 * next {
            return Ok(next);
        }
        prev = next;
    }
    Ok(prev)
}
