//! Shared numerical machinery.

pub mod diff;
pub mod elliptic;
pub mod optim;
pub mod quadrature;

pub use diff::{finite_diff_gradient, finite_diff_hessian};
pub use elliptic::{elliptic_k, elliptic_k_param, elliptic_k_quadrature};
pub use quadrature::{torus_quadrature, trapezoid_fixed, QuadValue, QuadratureResult, QuadratureSpec};
