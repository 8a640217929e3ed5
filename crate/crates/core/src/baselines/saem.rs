//! Stochastic approximation EM for the stochastic block model.
//!
//! A single Markov chain on the node labels takes one single-site sweep per
//! iteration targeting `p_theta(x | y)`. Its sufficient statistics are
//! averaged with Robbins-Monro weights and `theta` is the closed-form
//! maximizer of the averaged complete-data likelihood.

use std::time::Instant;

use crate::error::Result;
use crate::latent::LatentPoint;
use crate::model::LatentModel;
use crate::models::SbmModel;
use crate::particles::ParticleCloud;
use crate::rng::{phase, RngStream};
use crate::schedule::StepSchedule;
use crate::smc::{discrete_mutate, CategoryProposal, LogLinearTarget};
use crate::trace::{stop_rule, IterationRecord, RunTrace};

#[derive(Debug, Clone, PartialEq)]
pub struct SaemConfig {
    /// Averaging weights; `1/n` by default.
    pub schedule: StepSchedule,
    pub horizon: usize,
    pub sweeps: usize,
    pub stop_threshold: Option<f64>,
}

impl SaemConfig {
    pub fn harmonic(horizon: usize) -> Self {
        Self {
            schedule: StepSchedule::harmonic(horizon).expect("harmonic schedule is valid"),
            horizon,
            sweeps: 1,
            stop_threshold: None,
        }
    }
}

pub fn saem_sbm(model: &SbmModel, theta0: &[f64], config: &SaemConfig, rng: &RngStream) -> Result<RunTrace> {
    let start = Instant::now();
    let q = model.num_blocks;
    let mut theta = model.project_theta(theta0.to_vec())?;
    let mut chain = ParticleCloud::uniform(vec![model.sample_prior0(&mut rng.derive(&[phase::INIT]).rng())])?;
    let mut stats = None;
    let mut trace = RunTrace::default();
    trace.meta("algorithm", "saem");
    trace.meta("horizon", config.horizon);
    trace.meta("sweeps", config.sweeps);
    trace.meta("seed", rng.seed);
    trace.meta("stream", rng.stream_id);
    trace.records.push(IterationRecord {
        iter: 0,
        theta: theta.clone(),
        ess: 1.0,
        accept: f64::NAN,
        elapsed_ns: 0,
    });
    for n in 1..=config.horizon {
        let target = LogLinearTarget::new(model, 0.0, vec![(1.0, theta.clone())]);
        let (moved, accept) = discrete_mutate(
            &chain,
            &target,
            q,
            CategoryProposal::Uniform,
            None,
            config.sweeps,
            &rng.derive(&[phase::MUTATE, n as u64]),
        )?;
        chain = moved;
        let fresh = model.stats(chain.particles[0].labels());
        let averaged = match stats {
            None => fresh,
            Some(s) => crate::models::SbmStats::blend(&s, &fresh, config.schedule.gamma(n)),
        };
        theta = averaged.m_step(&theta);
        stats = Some(averaged);
        trace.records.push(IterationRecord {
            iter: n,
            theta: theta.clone(),
            ess: 1.0,
            accept,
            elapsed_ns: start.elapsed().as_nanos() as u64,
        });
        if let Some(threshold) = config.stop_threshold {
            if stop_rule(&trace.records, threshold) {
                break;
            }
        }
    }
    trace.final_cloud = Some(chain);
    Ok(trace)
}

/// Labels of the chain's final state.
pub fn saem_labels(trace: &RunTrace) -> Option<&[usize]> {
    trace.final_cloud.as_ref().map(|c| match &c.particles[0] {
        LatentPoint::Discrete(v) => v.as_slice(),
        LatentPoint::Real(_) => &[][..],
    })
}
