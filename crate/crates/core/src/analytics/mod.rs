//! Closed-form trigonometric moments, circular correlations and modes.

pub mod modes;
pub mod moments;

pub use modes::{modes, ModeKind, ModeReport};
pub use moments::{corr_coefficients, trig_moment, trig_moment_with_case, CorrCoefficients, MomentCase, MomentOrder};
