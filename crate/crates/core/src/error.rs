use thiserror::Error;

/// Errors raised by parameter validation, density evaluation, numerics and fitting.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TwccError {
    #[error("parameter `{name}` is not finite ({value})")]
    NonFinite { name: &'static str, value: f64 },

    #[error("dependence parameter {pair} is zero")]
    ZeroParameter { pair: &'static str },

    #[error("sign condition violated: rho12*rho13*rho23 = {product} must be > 0")]
    SignCondition { product: f64 },

    #[error(
        "no permutation satisfies |rho_jk| < |rho_ij rho_ik| / (|rho_ij| + |rho_ik|) \
         (best ratio {best_ratio:.6} at dominant index {dominant}; must be < 1)"
    )]
    NoValidPermutation { best_ratio: f64, dominant: usize },

    #[error("parameters lie within the relative margin of the validity boundary (ratio {ratio})")]
    DegenerateBoundary { ratio: f64 },

    #[error("parameters do not satisfy the strict inequality of branch {branch}")]
    BranchInfeasible { branch: String },

    #[error("zeta = {0} outside (-1, 0) U (0, 1)")]
    InvalidZeta(f64),

    #[error("normalizing radicand is negative ({0}); parameters escaped validation")]
    NegativeRadicand(f64),

    #[error("wrapped Cauchy concentration {0} is invalid (must be >= 0 and != 1)")]
    UnitConcentration(f64),

    #[error("C1 = {c1} must exceed {bound}")]
    IllegalC1 { c1: f64, bound: f64 },

    #[error("generalized normalizing factor {index} is not positive ({value})")]
    NegativeFactor { index: usize, value: f64 },

    #[error("dimension {0} is outside the supported range 3..=5")]
    DimensionTooLarge(usize),

    #[error("offset c4 = {c4} does not exceed 2*sum|rho_ij| = {bound}")]
    DenominatorNonpositive { c4: f64, bound: f64 },

    #[error("quadrature did not converge: estimate {estimate}, relative change {rel_change} at {points} points per axis")]
    QuadratureNotConverged { estimate: f64, rel_change: f64, points: usize },

    #[error("elliptic modulus {0} outside (-1, 1)")]
    ModulusOutOfRange(f64),

    #[error("column {column} has zero resultant length; circular mean undefined")]
    ZeroResultant { column: usize },

    #[error("sample is degenerate: {0}")]
    DegenerateSample(String),

    #[error("all {starts} optimizer starts failed")]
    AllStartsFailed { starts: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, TwccError>;
