//! Trivariate wrapped Cauchy copula on the 3-torus.
//!
//! Density, marginal and conditional evaluation, rejection-free sampling,
//! closed-form trigonometric moments and modes, and constrained maximum
//! likelihood with parametric bootstrap intervals. Every closed form has a
//! torus-quadrature counterpart in [`numerics::quadrature`] for checking.

pub mod analytics;
pub mod angles;
pub mod density;
pub mod error;
pub mod estimation;
pub mod io;
pub mod numerics;
pub mod params;
pub mod sampler;
pub mod study;

pub use angles::{reduce_angle, AnglePoint3, AngleSample};
pub use error::{Result, TwccError};
pub use params::{
    from_star, from_zeta, normalize_rho, pairwise_phi, phi_to_rho, rho_to_phi, to_star, to_zeta,
    validate_rho, Pair, PairwisePhi, Perm, PhiTriple, RhoParams, StarParams, ZetaBranch,
};
