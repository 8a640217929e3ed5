//! Maximum marginal likelihood estimation in latent variable models by
//! mirror descent, realized as sequential Monte Carlo samplers.
//!
//! Validity checks are written as `!(x > 0.0)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod diagnostics;
pub mod error;
pub mod geometry;
pub mod latent;
pub mod mmle;
pub mod model;
pub mod models;
pub mod oracles;
pub mod particles;
pub mod rng;
pub mod schedule;
pub mod smc;
pub mod trace;

pub use error::{Error, Result};
pub use geometry::{MirrorMap, ThetaState};
pub use latent::{LatentPoint, LatentSpace};
pub use mmle::{run_mmle, run_with_fixed_thetas, MmleConfig, Variant};
pub use model::LatentModel;
pub use particles::{effective_sample_size, normalize_weights, ParticleCloud};
pub use rng::RngStream;
pub use schedule::{StepRule, StepSchedule};
pub use smc::{CategoryProposal, KernelConfig, KernelKind, ProposalCovariance};
pub use trace::{stop_rule, IterationRecord, RunTrace, DEFAULT_STOP_THRESHOLD};
