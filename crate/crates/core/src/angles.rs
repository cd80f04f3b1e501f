//! Angles on the torus and samples of angle triples.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TwccError};

/// Reduces `x` into `[0, 2pi)`.
pub fn reduce_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// A point on the 3-torus with components in `[0, 2pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnglePoint3 {
    pub u: [f64; 3],
}

impl AnglePoint3 {
    pub fn new(u1: f64, u2: f64, u3: f64) -> AnglePoint3 {
        AnglePoint3 { u: [reduce_angle(u1), reduce_angle(u2), reduce_angle(u3)] }
    }

    pub fn from_array(u: [f64; 3]) -> AnglePoint3 {
        AnglePoint3::new(u[0], u[1], u[2])
    }

    /// Componentwise negation modulo `2pi`.
    pub fn reflect(&self) -> AnglePoint3 {
        AnglePoint3::new(-self.u[0], -self.u[1], -self.u[2])
    }
}

/// `n x 3` sample of angles in `[0, 2pi)`, optionally carrying the per-column
/// circular means removed by centering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleSample {
    rows: Vec<[f64; 3]>,
    centering: Option<[f64; 3]>,
}

impl AngleSample {
    /// Builds a raw sample, reducing every entry modulo `2pi`.
    pub fn new(rows: Vec<[f64; 3]>) -> Result<AngleSample> {
        let mut out = Vec::with_capacity(rows.len());
        for (m, row) in rows.iter().enumerate() {
            if row.iter().any(|x| !x.is_finite()) {
                return Err(TwccError::InvalidArgument(format!("row {m} has a non-finite angle")));
            }
            out.push(row.map(reduce_angle));
        }
        Ok(AngleSample { rows: out, centering: None })
    }

    /// Sample produced by centering; `offsets` are the removed circular means.
    pub fn centered(rows: Vec<[f64; 3]>, offsets: [f64; 3]) -> Result<AngleSample> {
        let mut s = AngleSample::new(rows)?;
        s.centering = Some(offsets);
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[[f64; 3]] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<[f64; 3]> {
        self.rows
    }

    pub fn is_centered(&self) -> bool {
        self.centering.is_some()
    }

    pub fn centering_offsets(&self) -> Option<[f64; 3]> {
        self.centering
    }

    pub fn column(&self, c: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(move |r| r[c])
    }

    /// Sample with every row repeated `times` times, in order.
    pub fn repeated(&self, times: usize) -> AngleSample {
        let mut rows = Vec::with_capacity(self.rows.len() * times);
        for _ in 0..times {
            rows.extend_from_slice(&self.rows);
        }
        AngleSample { rows, centering: self.centering }
    }
}
