//! Likelihood, score, expected information, the branch-wise maximum
//! likelihood fit and the bootstrap.

pub mod bootstrap;
pub mod empirical;
pub mod fisher;
pub mod fit;
pub mod likelihood;

pub use bootstrap::{bootstrap_ci, percentile, BootstrapKind, BootstrapSummary};
pub use empirical::{circular_center, circular_uncenter, empirical_trig_moment, empirical_trig_moments};
pub use fisher::{fisher_information, FisherInfo};
pub use fit::{fit_mle, fit_mle_with_rng, FitConfig, FitResult};
pub use likelihood::{log_likelihood, score, SampleCosines};
