//! Generic SMC sampler building blocks: targets, resampling and MH kernels.

pub mod kernels;
pub mod resample;
pub mod target;

pub use kernels::{
    adapt_rwm_covariance, adapt_rwm_diagonal, discrete_mutate, rwm_mutate, CategoryProposal, KernelConfig, KernelKind,
    ProposalCovariance, RwmProposal, RWM_SCALE,
};
pub use resample::{multinomial_ancestors, multinomial_resample};
pub use target::{FnTarget, LogLinearTarget, LogTarget};
