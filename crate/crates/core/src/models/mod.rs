//! Benchmark latent variable models.

pub mod blr;
pub mod gmm;
pub mod multimodal;
pub mod sbm;
pub mod toy;

pub use blr::BlrModel;
pub use gmm::{gmm_marginal_loglik, GmmModel};
pub use multimodal::MultimodalModel;
pub use sbm::{
    nu_index, sbm_nu_matrix, sbm_suff_stats, sbm_theta, sbm_theta_dim, sbm_theta_postprocess, SbmGraph, SbmModel, SbmStats,
    KARATE_FACTIONS,
};
pub use toy::{toy_exact_mle, toy_exact_posterior, ToyGaussianModel};

use crate::rng::SmcRng;
use rand_distr::{Distribution, StandardNormal};

pub const LN_2PI: f64 = 1.837_877_066_409_345_5;

pub(crate) fn standard_normal_vec(dim: usize, rng: &mut SmcRng) -> Vec<f64> {
    (0..dim).map(|_| StandardNormal.sample(rng)).collect()
}

pub(crate) fn standard_normal_logpdf(x: &[f64]) -> f64 {
    -0.5 * x.len() as f64 * LN_2PI - 0.5 * x.iter().map(|v| v * v).sum::<f64>()
}
