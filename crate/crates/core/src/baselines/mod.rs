//! Comparison algorithms: EM for the mixture, SAEM for the block model,
//! particle gradient descent and interacting particle Langevin for
//! differentiable continuous models, and SMC for marginal maximum likelihood.

pub mod em;
pub mod langevin;
pub mod saem;
pub mod smc_mml;

pub use em::{em_gmm, em_gmm_step};
pub use langevin::{ipla_step, pgd_step, run_langevin, LangevinConfig, LangevinVariant};
pub use saem::{saem_labels, saem_sbm, SaemConfig};
pub use smc_mml::{smc_mml, SmcMmlConfig};
