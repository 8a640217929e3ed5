//! Metrics and exact references used to check the samplers.

pub mod clustering;
pub mod enumerate;
pub mod gaussian;
pub mod stats;
pub mod toy;
pub mod wasserstein;

pub use clustering::{adjusted_rand_index, posterior_mode_labels, sbm_theta_mse};
pub use enumerate::{enumerate_target, enumerate_target_with_cap, EnumeratedDistribution, DEFAULT_STATE_CAP};
pub use gaussian::{gaussian_fit, gaussian_kl, GaussianSummary};
pub use stats::{loglog_slope, mean, median, sample_variance};
pub use toy::{free_energy_estimate, toy_exact_free_energy, toy_exact_recursion};
pub use wasserstein::wasserstein1_1d;
