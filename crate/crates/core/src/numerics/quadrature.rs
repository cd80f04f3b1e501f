//! Product trapezoidal rule on the torus `[0, 2pi)^d`.
//!
//! For smooth periodic integrands the equally spaced rule converges
//! geometrically. Grids nest under doubling, and the sum is taken slab by slab
//! over the first axis in a fixed order, so results do not depend on the
//! number of worker threads.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Result, TwccError};

/// Values that can be integrated: a vector space over `f64` with a norm.
pub trait QuadValue: Copy + Send + Sync {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn scale(self, s: f64) -> Self;
    /// Max-norm, used for convergence checks.
    fn norm(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(self) -> f64 {
        self.re.abs().max(self.im.abs())
    }
}

impl<const N: usize> QuadValue for [f64; N] {
    fn zero() -> Self {
        [0.0; N]
    }
    fn add(mut self, other: Self) -> Self {
        for (a, b) in self.iter_mut().zip(other) {
            *a += b;
        }
        self
    }
    fn scale(self, s: f64) -> Self {
        self.map(|a| a * s)
    }
    fn norm(self) -> f64 {
        self.iter().fold(0.0, |m, a| m.max(a.abs()))
    }
}

/// Resolution schedule for [`torus_quadrature`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub dims: usize,
    /// Starting points per axis (a power of two, at least 16).
    pub points: usize,
    pub rel_tol: f64,
    /// Differences below this are accepted regardless of the magnitude of the
    /// integral (needed when the exact value is zero).
    pub abs_tol: f64,
    pub max_doublings: usize,
}

impl QuadratureSpec {
    pub fn new(dims: usize) -> QuadratureSpec {
        QuadratureSpec { dims, points: 16, rel_tol: 1e-8, abs_tol: 0.0, max_doublings: 6 }
    }

    pub fn with_points(mut self, points: usize) -> Self {
        self.points = points;
        self
    }

    pub fn with_rel_tol(mut self, tol: f64) -> Self {
        self.rel_tol = tol;
        self
    }

    pub fn with_abs_tol(mut self, tol: f64) -> Self {
        self.abs_tol = tol;
        self
    }

    pub fn with_max_doublings(mut self, n: usize) -> Self {
        self.max_doublings = n;
        self
    }

    fn check(&self) -> Result<()> {
        if !(1..=5).contains(&self.dims) {
            return Err(TwccError::DimensionTooLarge(self.dims));
        }
        if self.points < 16 || !self.points.is_power_of_two() {
            return Err(TwccError::InvalidArgument(format!(
                "points per axis {} must be a power of two >= 16",
                self.points
            )));
        }
        Ok(())
    }
}

/// Outcome of [`torus_quadrature`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureResult<T> {
    pub value: T,
    /// Change between the last two levels, relative to the last value.
    pub rel_change: f64,
    /// Points per axis at the last level.
    pub points: usize,
    pub converged: bool,
    /// Relative change recorded at every doubling.
    pub history: Vec<f64>,
}

impl<T> QuadratureResult<T> {
    /// Converts a non-converged result into an error.
    pub fn require(self) -> Result<QuadratureResult<T>>
    where
        T: QuadValue,
    {
        if self.converged {
            Ok(self)
        } else {
            Err(TwccError::QuadratureNotConverged {
                estimate: self.value.norm(),
                rel_change: self.rel_change,
                points: self.points,
            })
        }
    }
}

/// Trapezoidal rule with `n` points per axis: `(2pi)^d` times the grid mean.
pub fn trapezoid_fixed<T, F>(f: &F, dims: usize, n: usize) -> T
where
    T: QuadValue,
    F: Fn(&[f64]) -> T + Sync,
{
    let h = TAU / n as f64;
    let inner = n.pow(dims as u32 - 1);
    let slabs: Vec<T> = (0..n)
        .into_par_iter()
        .map(|i0| {
            let mut u = vec![0.0; dims];
            u[0] = i0 as f64 * h;
            let mut idx = vec![0usize; dims];
            let mut slab = T::zero();
            let mut row = T::zero();
            for m in 0..inner {
                if dims > 1 {
                    let mut rem = m;
                    for d in (1..dims).rev() {
                        idx[d] = rem % n;
                        rem /= n;
                        u[d] = idx[d] as f64 * h;
                    }
                }
                row = row.add(f(&u));
                // close a row whenever the last axis wraps
                if dims == 1 || idx[dims - 1] == n - 1 {
                    slab = slab.add(row);
                    row = T::zero();
                }
            }
            slab.add(row)
        })
        .collect();
    let total = slabs.into_iter().fold(T::zero(), T::add);
    total.scale(TAU.powi(dims as i32) / (n as f64).powi(dims as i32))
}

/// Doubles the per-axis resolution until two successive levels agree.
///
/// Returns the best estimate even when not converged; callers that need a
/// hard failure use [`QuadratureResult::require`].
pub fn torus_quadrature<T, F>(f: F, spec: QuadratureSpec) -> Result<QuadratureResult<T>>
where
    T: QuadValue,
    F: Fn(&[f64]) -> T + Sync,
{
    spec.check()?;
    let mut n = spec.points;
    let mut prev = trapezoid_fixed(&f, spec.dims, n);
    let mut history = Vec::new();
    for _ in 0..spec.max_doublings {
        n *= 2;
        let next = trapezoid_fixed(&f, spec.dims, n);
        let diff = next.add(prev.scale(-1.0)).norm();
        let scale = next.norm();
        let rel = if scale > 0.0 { diff / scale } else { diff };
        history.push(rel);
        prev = next;
        if rel <= spec.rel_tol || diff <= spec.abs_tol {
            return Ok(QuadratureResult { value: prev, rel_change: rel, points: n, converged: true, history });
        }
    }
    let rel_change = history.last().copied().unwrap_or(f64::INFINITY);
    Ok(QuadratureResult { value: prev, rel_change, points: n, converged: false, history })
}
