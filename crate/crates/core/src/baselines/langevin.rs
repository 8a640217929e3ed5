//! Particle gradient descent (PGD) and the interacting particle Langevin
//! algorithm (IPLA). Both move particles by unadjusted Langevin steps on
//! `x -> U(theta, x)`; PGD takes a plain gradient step in `theta` and IPLA
//! adds `sqrt(2 gamma / N)` Gaussian noise to it.
//!
//! Nothing guards against instability: a particle that becomes non-finite
//! or leaves the model's support is recorded in `RunTrace::divergences`
//! and the run carries on.

use std::time::Instant;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::latent::LatentPoint;
use crate::mmle::sample_initial_cloud;
use crate::model::LatentModel;
use crate::particles::ParticleCloud;
use crate::rng::{phase, RngStream};
use crate::schedule::StepSchedule;
use crate::trace::{IterationRecord, RunTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LangevinVariant {
    Pgd,
    Ipla,
}

impl LangevinVariant {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Pgd => "pgd",
            Self::Ipla => "ipla",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LangevinConfig {
    pub variant: LangevinVariant,
    pub schedule: StepSchedule,
    pub num_particles: usize,
    pub horizon: usize,
}

fn mean_grad_theta<M: LatentModel + ?Sized>(model: &M, theta: &[f64], particles: &[LatentPoint]) -> Vec<f64> {
    let grads: Vec<Vec<f64>> = particles.par_iter().map(|x| model.grad_theta_u(theta, x)).collect();
    let mut g = vec![0.0; theta.len()];
    for v in grads {
        for (a, b) in g.iter_mut().zip(v) {
            *a += b;
        }
    }
    let n = particles.len() as f64;
    g.iter_mut().for_each(|a| *a /= n);
    g
}

fn langevin_particles<M: LatentModel + ?Sized>(
    model: &M,
    theta: &[f64],
    particles: &[LatentPoint],
    gamma: f64,
    rng: &RngStream,
) -> Result<Vec<LatentPoint>> {
    let noise = (2.0 * gamma).sqrt();
    particles
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            let g = model.grad_x_u(theta, x).ok_or(Error::MissingLatentGradient)?;
            let mut r = rng.derive(&[i as u64]).rng();
            Ok(LatentPoint::Real(
                x.real()
                    .iter()
                    .zip(g)
                    .map(|(xi, gi)| xi - gamma * gi + noise * r.sample::<f64, _>(StandardNormal))
                    .collect(),
            ))
        })
        .collect()
}

fn step<M: LatentModel + ?Sized>(
    variant: LangevinVariant,
    model: &M,
    theta: &[f64],
    particles: &[LatentPoint],
    gamma: f64,
    rng: &RngStream,
) -> Result<(Vec<f64>, Vec<LatentPoint>)> {
    let g = mean_grad_theta(model, theta, particles);
    let mut next: Vec<f64> = theta.iter().zip(&g).map(|(t, gi)| t - gamma * gi).collect();
    if variant == LangevinVariant::Ipla {
        let scale = (2.0 * gamma / particles.len() as f64).sqrt();
        let mut r = rng.derive(&[phase::THETA_NOISE]).rng();
        for t in &mut next {
            *t += scale * r.sample::<f64, _>(StandardNormal);
        }
    }
    let moved = langevin_particles(model, theta, particles, gamma, &rng.derive(&[phase::MODEL_NOISE]))?;
    Ok((next, moved))
}

/// One PGD update of `(theta, particles)`; both use the current values.
pub fn pgd_step<M: LatentModel + ?Sized>(
    model: &M,
    theta: &[f64],
    particles: &[LatentPoint],
    gamma: f64,
    rng: &RngStream,
) -> Result<(Vec<f64>, Vec<LatentPoint>)> {
    step(LangevinVariant::Pgd, model, theta, particles, gamma, rng)
}

/// One IPLA update: the PGD update plus `sqrt(2 gamma / N) xi` on `theta`.
pub fn ipla_step<M: LatentModel + ?Sized>(
    model: &M,
    theta: &[f64],
    particles: &[LatentPoint],
    gamma: f64,
    rng: &RngStream,
) -> Result<(Vec<f64>, Vec<LatentPoint>)> {
    step(LangevinVariant::Ipla, model, theta, particles, gamma, rng)
}

pub fn run_langevin<M: LatentModel + ?Sized>(
    model: &M,
    config: &LangevinConfig,
    theta0: &[f64],
    rng: &RngStream,
) -> Result<RunTrace> {
    if config.num_particles == 0 {
        return Err(Error::InvalidConfig("need at least one particle".into()));
    }
    if model.latent_space().is_discrete() {
        return Err(Error::MissingLatentGradient);
    }
    let start = Instant::now();
    let mut particles = sample_initial_cloud(model, config.num_particles, rng)?.particles;
    let mut theta = theta0.to_vec();
    let n_particles = config.num_particles as f64;
    let mut trace = RunTrace::default();
    trace.meta("algorithm", config.variant.name());
    trace.meta("particles", config.num_particles);
    trace.meta("horizon", config.horizon);
    trace.meta("seed", rng.seed);
    trace.meta("stream", rng.stream_id);
    let record = |iter, theta: &[f64], start: &Instant| IterationRecord {
        iter,
        theta: theta.to_vec(),
        ess: n_particles,
        accept: f64::NAN,
        elapsed_ns: start.elapsed().as_nanos() as u64,
    };
    trace.records.push(record(0, &theta, &start));
    for n in 1..=config.horizon {
        let gamma = config.schedule.gamma(n);
        let (next, moved) = step(config.variant, model, &theta, &particles, gamma, &rng.derive(&[n as u64]))?;
        theta = next;
        particles = moved;
        let escaped = particles
            .par_iter()
            .any(|x| !x.is_finite() || !model.log_joint(&theta, x).is_finite());
        if escaped || theta.iter().any(|t| !t.is_finite()) {
            trace.divergences.push(n);
        }
        trace.records.push(record(n, &theta, &start));
    }
    trace.final_cloud = Some(ParticleCloud::uniform(particles)?);
    Ok(trace)
}
