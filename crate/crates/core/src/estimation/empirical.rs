//! Sample trigonometric moments and circular-mean centering.

use num_complex::Complex64;

use crate::analytics::MomentOrder;
use crate::angles::{reduce_angle, AngleSample};
use crate::error::{Result, TwccError};
use crate::params::Pair;

/// `(1/n) sum_m exp(i (p . u_m))`.
pub fn empirical_trig_moment(s: &AngleSample, o: MomentOrder) -> Complex64 {
    let n = s.len() as f64;
    let sum: Complex64 = s
        .rows()
        .iter()
        .map(|u| {
            let arg = o.p[0] as f64 * u[0] + o.p[1] as f64 * u[1] + o.p[2] as f64 * u[2];
            Complex64::from_polar(1.0, arg)
        })
        .sum();
    sum / n
}

/// `(1/n) sum_m exp(i (u_ma - u_mb))` for each pair `(a, b)`.
pub fn empirical_trig_moments(s: &AngleSample, pairs: &[Pair]) -> Vec<Complex64> {
    pairs
        .iter()
        .map(|pair| {
            let (a, b) = pair.axes();
            let mut o = [0; 3];
            o[a] = 1;
            o[b] = -1;
            empirical_trig_moment(s, MomentOrder { p: o })
        })
        .collect()
}

/// Removes each column's circular mean. Offsets accumulate when the input
/// was already centered, so [`circular_uncenter`] always restores raw data.
pub fn circular_center(s: &AngleSample) -> Result<AngleSample> {
    let n = s.len() as f64;
    let mut means = [0.0; 3];
    for (c, m) in means.iter_mut().enumerate() {
        let r: Complex64 = s.column(c).map(|a| Complex64::from_polar(1.0, a)).sum::<Complex64>() / n;
        if !(r.norm() > 1e-12) {
            return Err(TwccError::ZeroResultant { column: c });
        }
        *m = r.arg();
    }
    let rows = s.rows().iter().map(|u| [0, 1, 2].map(|c| u[c] - means[c])).collect();
    let prior = s.centering_offsets().unwrap_or([0.0; 3]);
    AngleSample::centered(rows, [0, 1, 2].map(|c| reduce_angle(prior[c] + means[c])))
}

/// Adds the recorded centering offsets back.
pub fn circular_uncenter(s: &AngleSample) -> AngleSample {
    match s.centering_offsets() {
        None => s.clone(),
        Some(off) => {
            let rows = s.rows().iter().map(|u| [0, 1, 2].map(|c| u[c] + off[c])).collect();
            AngleSample::new(rows).expect("finite angles")
        }
    }
}
