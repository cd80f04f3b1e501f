//! Modes and antimodes. Each is a line `(t, t + o2, t + o3)` on the torus
//! with offsets `o2, o3` equal to `0` or `pi`.
//!
//! With all three parameters positive the density peaks where the dominant
//! angle is opposite the other two, and bottoms out where all three agree.
//! Two negative parameters share an axis; shifting that axis by `pi` flips
//! both signs, which reduces every valid sign pattern to the positive one.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::angles::reduce_angle;
use crate::params::{others, Pair, Perm, RhoParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModeKind {
    Mode,
    Antimode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeReport {
    pub kind: ModeKind,
    /// `(u2 - u1, u3 - u1)` along the line, each `0` or `pi`.
    pub offsets: [f64; 2],
    /// Dominant axis first.
    pub branch: Perm,
    /// Axis shifted by `pi` to reach the all-positive pattern, if any.
    pub flipped_axis: Option<usize>,
}

impl ModeReport {
    /// Point of the line with first angle `t`.
    pub fn point(&self, t: f64) -> [f64; 3] {
        [reduce_angle(t), reduce_angle(t + self.offsets[0]), reduce_angle(t + self.offsets[1])]
    }

    /// Whether `u` lies on the line, up to `tol` in each wrapped difference.
    pub fn contains(&self, u: &[f64; 3], tol: f64) -> bool {
        let d = |a: f64| {
            let r = reduce_angle(a);
            r.min(2.0 * PI - r)
        };
        d(u[1] - u[0] - self.offsets[0]) <= tol && d(u[2] - u[0] - self.offsets[1]) <= tol
    }
}

impl fmt::Display for ModeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |o: f64, name: &str| if o == 0.0 { format!("{name} = u1") } else { format!("{name} = u1 + pi") };
        write!(f, "{}, {}", term(self.offsets[0], "u2"), term(self.offsets[1], "u3"))
    }
}

fn offsets_from_shifts(shift: [bool; 3]) -> [f64; 2] {
    let rel = |a: usize| if shift[a] != shift[0] { PI } else { 0.0 };
    [rel(1), rel(2)]
}

/// Mode and antimode lines of the density at `p`.
pub fn modes(p: &RhoParams) -> (ModeReport, ModeReport) {
    let i = p.dominant();
    let (j, k) = others(i);
    let branch = Perm { i, j, k };
    // the axis shared by the two negative parameters
    let flipped_axis = if Pair::ALL.iter().all(|&q| p.get(q) > 0.0) {
        None
    } else {
        (0..3).find(|&a| {
            let (b, c) = others(a);
            p.between(a, b) < 0.0 && p.between(a, c) < 0.0
        })
    };
    let mut mode_shift = [false; 3];
    mode_shift[i] = true;
    let mut anti_shift = [false; 3];
    if let Some(a) = flipped_axis {
        mode_shift[a] = !mode_shift[a];
        anti_shift[a] = !anti_shift[a];
    }
    (
        ModeReport { kind: ModeKind::Mode, offsets: offsets_from_shifts(mode_shift), branch, flipped_axis },
        ModeReport { kind: ModeKind::Antimode, offsets: offsets_from_shifts(anti_shift), branch, flipped_axis },
    )
}
