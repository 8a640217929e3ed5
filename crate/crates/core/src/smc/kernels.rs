//! Metropolis–Hastings mutation kernels.
//!
//! Kernels move particle positions only; weights pass through unchanged.
//! Each particle draws from its own stream `rng.derive(&[i])`, so results do
//! not depend on how rayon schedules the work.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::latent::LatentPoint;
use crate::particles::ParticleCloud;
use crate::rng::RngStream;
use crate::smc::target::LogTarget;

/// Optimal-scaling constant for random walk Metropolis.
pub const RWM_SCALE: f64 = 2.38;

#[derive(Debug, Clone, PartialEq)]
pub enum ProposalCovariance {
    /// Weighted empirical covariance of the current cloud.
    Adaptive,
    /// Diagonal of the weighted empirical covariance.
    AdaptiveDiagonal,
    /// `scale * I`.
    Identity(f64),
    Fixed(DMatrix<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CategoryProposal {
    /// Uniform over all categories, the current one included, so the
    /// two-category chain is aperiodic on flat targets.
    Uniform,
    /// The model's own category law at the site (independence proposal).
    Prior,
}

#[derive(Debug, Clone, PartialEq)]
pub enum KernelKind {
    RandomWalk {
        /// `None` means `2.38 / sqrt(d_x)`.
        step_scale: Option<f64>,
        covariance: ProposalCovariance,
    },
    DiscreteSingleSite { proposal: CategoryProposal },
}

/// A kernel family plus how many steps (continuous) or full sweeps
/// (discrete) to apply per SMC iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelConfig {
    pub kind: KernelKind,
    pub mcmc_steps: usize,
}

impl KernelConfig {
    pub fn adaptive_rwm() -> Self {
        Self {
            kind: KernelKind::RandomWalk {
                step_scale: None,
                covariance: ProposalCovariance::Adaptive,
            },
            mcmc_steps: 1,
        }
    }

    pub fn discrete(proposal: CategoryProposal) -> Self {
        Self {
            kind: KernelKind::DiscreteSingleSite { proposal },
            mcmc_steps: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mcmc_steps == 0 {
            return Err(Error::InvalidConfig("mcmc steps per iteration must be >= 1".into()));
        }
        if let KernelKind::RandomWalk { step_scale: Some(s), covariance } = &self.kind {
            if !(*s > 0.0) {
                return Err(Error::InvalidConfig(format!("step scale must be > 0, got {s}")));
            }
            if let ProposalCovariance::Identity(v) = covariance {
                if !(*v > 0.0) {
                    return Err(Error::NonSpdCovariance);
                }
            }
        }
        Ok(())
    }
}

/// Gaussian random-walk proposal `x + step_scale * L z` with `L L^T` the covariance.
#[derive(Debug, Clone)]
pub struct RwmProposal {
    step_scale: f64,
    chol: DMatrix<f64>,
    /// Diagonal of `L` when `L` is diagonal, for O(d) proposals.
    diag: Option<Vec<f64>>,
}

impl RwmProposal {
    pub fn new(step_scale: f64, covariance: &DMatrix<f64>) -> Result<Self> {
        if !covariance.is_square() {
            return Err(Error::NonSpdCovariance);
        }
        let sym_err = (covariance - covariance.transpose()).abs().max();
        if !(sym_err <= 1e-10 * covariance.abs().max().max(1.0)) {
            return Err(Error::NonSpdCovariance);
        }
        let chol = covariance.clone().cholesky().ok_or(Error::NonSpdCovariance)?.l();
        let d = chol.nrows();
        let is_diagonal = (0..d).all(|j| (0..d).all(|i| i == j || chol[(i, j)] == 0.0));
        let diag = is_diagonal.then(|| chol.diagonal().iter().copied().collect());
        Ok(Self { step_scale, chol, diag })
    }

    pub fn dim(&self) -> usize {
        self.chol.nrows()
    }
}

/// Weighted empirical covariance of a continuous cloud, floored by
/// `1e-6 * (trace / d) * I`. Falls back to the identity when the cloud has
/// no spread or too few particles to estimate it.
pub fn adapt_rwm_covariance(cloud: &ParticleCloud) -> Result<DMatrix<f64>> {
    cloud.require_normalized()?;
    let d = cloud.particles[0].len();
    if cloud.len() < d + 2 {
        return Ok(DMatrix::identity(d, d));
    }
    let weights = cloud.weights();
    let mut mean = DVector::zeros(d);
    for (x, w) in cloud.particles.iter().zip(&weights) {
        mean += DVector::from_column_slice(x.real()) * *w;
    }
    let mut cov = DMatrix::zeros(d, d);
    for (x, w) in cloud.particles.iter().zip(&weights) {
        if *w == 0.0 {
            continue;
        }
        let dx = DVector::from_column_slice(x.real()) - &mean;
        cov += &dx * dx.transpose() * *w;
    }
    if cov.iter().any(|v| !v.is_finite()) {
        return Err(Error::DegenerateCloud("empirical covariance is not finite".into()));
    }
    let trace = cov.trace();
    // spread at rounding level counts as none
    if !(trace > 1e-20 * (1.0 + mean.norm_squared())) {
        return Ok(DMatrix::identity(d, d));
    }
    for i in 0..d {
        cov[(i, i)] += 1e-6 * trace / d as f64;
    }
    if cov.clone().cholesky().is_none() {
        return Ok(DMatrix::identity(d, d));
    }
    Ok(cov)
}

/// Diagonal of [`adapt_rwm_covariance`], with the same fallbacks. Unlike the
/// full matrix it keeps proposing in every direction when resampling has
/// left the cloud on a low-dimensional subspace.
pub fn adapt_rwm_diagonal(cloud: &ParticleCloud) -> Result<DMatrix<f64>> {
    let full = adapt_rwm_covariance(cloud)?;
    Ok(DMatrix::from_diagonal(&full.diagonal()))
}

/// Advances every particle by `steps` random walk Metropolis moves targeting
/// `exp(target)`. Returns the moved cloud and the overall acceptance rate.
pub fn rwm_mutate<T: LogTarget + ?Sized>(
    cloud: &ParticleCloud,
    target: &T,
    proposal: &RwmProposal,
    steps: usize,
    rng: &RngStream,
) -> Result<(ParticleCloud, f64)> {
    let d = proposal.dim();
    if let Some(bad) = cloud.particles.iter().find(|x| x.len() != d || matches!(x, LatentPoint::Discrete(_))) {
        return Err(Error::LatentMismatch(format!(
            "random walk kernel of dimension {d} applied to {bad:?}"
        )));
    }
    let moved: Vec<(LatentPoint, usize)> = cloud
        .particles
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            let mut r = rng.derive(&[i as u64]).rng();
            let mut cur = x.clone();
            let mut cur_lp = target.log_density(x);
            let mut accepted = 0;
            let mut z = vec![0.0; d];
            let mut prop = LatentPoint::Real(vec![0.0; d]);
            for _ in 0..steps {
                z.iter_mut().for_each(|v| *v = r.sample(StandardNormal));
                if let LatentPoint::Real(p) = &mut prop {
                    p.copy_from_slice(cur.real());
                    match &proposal.diag {
                        Some(l) => p.iter_mut().zip(&z).zip(l).for_each(|((p, z), l)| *p += proposal.step_scale * l * z),
                        None => {
                            let step = &proposal.chol * DVector::from_column_slice(&z);
                            p.iter_mut().zip(step.iter()).for_each(|(p, s)| *p += proposal.step_scale * s);
                        }
                    }
                }
                let prop_lp = target.log_density(&prop);
                let log_u = r.random::<f64>().ln();
                if log_u < prop_lp - cur_lp {
                    std::mem::swap(&mut cur, &mut prop);
                    cur_lp = prop_lp;
                    accepted += 1;
                }
            }
            (cur, accepted)
        })
        .collect();
    let total = steps * cloud.len();
    let accepted: usize = moved.iter().map(|(_, a)| a).sum();
    let particles = moved.into_iter().map(|(x, _)| x).collect();
    let out = ParticleCloud {
        particles,
        log_weights: cloud.log_weights.clone(),
        normalized: cloud.normalized,
    };
    let rate = if total == 0 { 1.0 } else { accepted as f64 / total as f64 };
    Ok((out, rate))
}

/// Single-site Metropolis–Hastings sweeps over a discrete cloud. Each sweep
/// visits every site once in a fresh random order.
///
/// `site_laws[i]` is the independence proposal at site `i` for
/// [`CategoryProposal::Prior`]; it is ignored for the uniform proposal.
pub fn discrete_mutate<T: LogTarget + ?Sized>(
    cloud: &ParticleCloud,
    target: &T,
    num_categories: usize,
    proposal: CategoryProposal,
    site_laws: Option<&[Vec<f64>]>,
    sweeps: usize,
    rng: &RngStream,
) -> Result<(ParticleCloud, f64)> {
    if num_categories <= 1 {
        return Ok((cloud.clone(), 1.0));
    }
    if proposal == CategoryProposal::Prior && site_laws.is_none() {
        return Err(Error::InvalidConfig("prior-category proposal needs the model's category law".into()));
    }
    let moved: Vec<(LatentPoint, usize, usize)> = cloud
        .particles
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            let mut r = rng.derive(&[i as u64]).rng();
            let mut labels = x.labels().to_vec();
            let mut order: Vec<usize> = (0..labels.len()).collect();
            let mut accepted = 0;
            let mut proposed = 0;
            for _ in 0..sweeps {
                order.shuffle(&mut r);
                for &site in &order {
                    let cur = labels[site];
                    let (new, log_q_ratio) = match proposal {
                        CategoryProposal::Uniform => {
                            (r.random_range(0..num_categories), 0.0)
                        }
                        CategoryProposal::Prior => {
                            let law = &site_laws.unwrap()[site];
                            let new = sample_category(law, r.random::<f64>());
                            (new, law[cur].ln() - law[new].ln())
                        }
                    };
                    proposed += 1;
                    if new == cur {
                        accepted += 1;
                        continue;
                    }
                    let delta = target.site_delta(&labels, site, new) + log_q_ratio;
                    if r.random::<f64>().ln() < delta {
                        labels[site] = new;
                        accepted += 1;
                    }
                }
            }
            (LatentPoint::Discrete(labels), accepted, proposed)
        })
        .collect();
    let accepted: usize = moved.iter().map(|m| m.1).sum();
    let proposed: usize = moved.iter().map(|m| m.2).sum();
    let out = ParticleCloud {
        particles: moved.into_iter().map(|m| m.0).collect(),
        log_weights: cloud.log_weights.clone(),
        normalized: cloud.normalized,
    };
    let rate = if proposed == 0 { 1.0 } else { accepted as f64 / proposed as f64 };
    Ok((out, rate))
}

fn sample_category(law: &[f64], u: f64) -> usize {
    let total: f64 = law.iter().sum();
    let mut acc = 0.0;
    for (k, p) in law.iter().enumerate() {
        acc += p / total;
        if u < acc {
            return k;
        }
    }
    law.len() - 1
}
