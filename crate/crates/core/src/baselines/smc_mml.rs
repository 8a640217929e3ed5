//! SMC for marginal maximum likelihood on the extended target
//! `p_beta(theta, x_1..x_beta) ~ prior(theta) prod_k p_theta(x_k, y)`,
//! whose `theta` marginal is proportional to `prior(theta) p_theta(y)^beta`.
//!
//! The ladder is `beta_t = t`. Rung `t` appends a copy `x_t ~ mu_0` with
//! weight `p_theta(x_t, y) / mu_0(x_t)`, an unbiased estimate of
//! `p_theta(y)`, then resamples, applies random walk moves to `theta` and
//! refreshes every copy with one random walk step at the particle's `theta`.
//! The prior on `theta` is flat on a box. Continuous latent spaces only.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::latent::LatentPoint;
use crate::model::LatentModel;
use crate::particles::{effective_sample_size, normalize_weights, ParticleCloud};
use crate::rng::{phase, RngStream};
use crate::smc::{adapt_rwm_covariance, multinomial_ancestors, RWM_SCALE};
use crate::trace::{IterationRecord, RunTrace};

#[derive(Debug, Clone, PartialEq)]
pub struct SmcMmlConfig {
    pub num_particles: usize,
    pub rungs: usize,
    /// Componentwise support of the flat prior on `theta`.
    pub theta_lo: f64,
    pub theta_hi: f64,
    /// Random walk steps on `theta` per rung.
    pub theta_moves: usize,
}

impl SmcMmlConfig {
    pub fn new(num_particles: usize, rungs: usize) -> Self {
        Self {
            num_particles,
            rungs,
            theta_lo: -30.0,
            theta_hi: 30.0,
            theta_moves: 1,
        }
    }
}

#[derive(Debug, Clone)]
struct Particle {
    theta: Vec<f64>,
    copies: Vec<Vec<f64>>,
}

fn cholesky_of(cloud: &ParticleCloud) -> Result<DMatrix<f64>> {
    let cov = adapt_rwm_covariance(cloud)?;
    Ok(cov.cholesky().ok_or(Error::NonSpdCovariance)?.l())
}

fn step(x: &[f64], chol: &DMatrix<f64>, scale: f64, r: &mut crate::rng::SmcRng) -> Vec<f64> {
    let z = DVector::from_iterator(x.len(), (0..x.len()).map(|_| r.sample::<f64, _>(StandardNormal)));
    let dz = chol * z * scale;
    x.iter().zip(dz.iter()).map(|(a, b)| a + b).collect()
}

fn weighted_theta_mean(ps: &[Particle], log_w: &[f64]) -> Vec<f64> {
    let mut m = vec![0.0; ps[0].theta.len()];
    for (p, lw) in ps.iter().zip(log_w) {
        let w = lw.exp();
        for (a, b) in m.iter_mut().zip(&p.theta) {
            *a += w * b;
        }
    }
    m
}

pub fn smc_mml<M: LatentModel + ?Sized>(model: &M, config: &SmcMmlConfig, rng: &RngStream) -> Result<RunTrace> {
    if model.latent_space().is_discrete() {
        return Err(Error::LatentMismatch("SMC-MML is implemented for continuous latent spaces".into()));
    }
    if config.num_particles < 2 || config.rungs == 0 || !(config.theta_lo < config.theta_hi) {
        return Err(Error::InvalidConfig("SMC-MML needs N >= 2, at least one rung and a non-empty box".into()));
    }
    let start = Instant::now();
    let (n, dt, dx) = (config.num_particles, model.theta_dim(), model.latent_space().dim());
    let (lo, hi) = (config.theta_lo, config.theta_hi);
    let in_box = |t: &[f64]| t.iter().all(|v| *v >= lo && *v <= hi);
    let mut ps: Vec<Particle> = (0..n)
        .map(|i| {
            let mut r = rng.derive(&[phase::INIT, i as u64]).rng();
            Particle {
                theta: (0..dt).map(|_| r.random_range(lo..hi)).collect(),
                copies: Vec::new(),
            }
        })
        .collect();
    let mut trace = RunTrace::default();
    trace.meta("algorithm", "smc-mml");
    trace.meta("particles", n);
    trace.meta("rungs", config.rungs);
    trace.meta("ladder", "beta_t = t");
    trace.meta("theta_prior", format!("flat on [{lo}, {hi}]^{dt}"));
    trace.meta("theta_moves", config.theta_moves);
    trace.meta("copy_refresh", "one random walk step per copy per rung");
    trace.meta("seed", rng.seed);
    trace.meta("stream", rng.stream_id);
    let uniform_lw = vec![-(n as f64).ln(); n];
    trace.records.push(IterationRecord {
        iter: 0,
        theta: weighted_theta_mean(&ps, &uniform_lw),
        ess: n as f64,
        accept: f64::NAN,
        elapsed_ns: 0,
    });

    for t in 1..=config.rungs {
        // extend with a fresh copy and weight by the evidence estimate
        let lw: Vec<f64> = ps
            .par_iter_mut()
            .enumerate()
            .map(|(i, p)| {
                let x = model.sample_prior0(&mut rng.derive(&[phase::AUX, t as u64, i as u64]).rng());
                let w = model.log_joint(&p.theta, &x) - model.log_prior0(&x);
                p.copies.push(x.real().to_vec());
                if w.is_nan() {
                    f64::NEG_INFINITY
                } else {
                    w
                }
            })
            .collect();
        let placeholders = vec![LatentPoint::Real(vec![]); n];
        let cloud = normalize_weights(ParticleCloud::weighted(placeholders, lw)?)
            .map_err(|_| Error::WeightCollapse { iteration: t })?;
        let ess = effective_sample_size(&cloud)?;
        let ancestors = multinomial_ancestors(&cloud, &rng.derive(&[phase::RESAMPLE, t as u64]))?;
        ps = ancestors.iter().map(|&a| ps[a].clone()).collect();

        // random walk on theta against prod_k p_theta(x_k, y) on the box
        let theta_cloud = ParticleCloud::uniform(ps.iter().map(|p| LatentPoint::Real(p.theta.clone())).collect())?;
        let chol = cholesky_of(&theta_cloud)?;
        let scale = RWM_SCALE / (dt as f64).sqrt();
        let accepted: usize = ps
            .par_iter_mut()
            .enumerate()
            .map(|(i, p)| {
                let mut r = rng.derive(&[phase::MUTATE, t as u64, i as u64]).rng();
                let log_target = |th: &[f64]| -> f64 {
                    if !in_box(th) {
                        return f64::NEG_INFINITY;
                    }
                    p.copies.iter().map(|x| model.log_joint(th, &LatentPoint::Real(x.clone()))).sum()
                };
                let mut cur = log_target(&p.theta);
                let mut acc = 0;
                for _ in 0..config.theta_moves {
                    let prop = step(&p.theta, &chol, scale, &mut r);
                    let lp = log_target(&prop);
                    if r.random::<f64>().ln() < lp - cur {
                        p.theta = prop;
                        cur = lp;
                        acc += 1;
                    }
                }
                acc
            })
            .sum();

        // refresh each copy given its particle's theta
        let copy_chols: Vec<DMatrix<f64>> = (0..t)
            .map(|k| {
                let c = ParticleCloud::uniform(ps.iter().map(|p| LatentPoint::Real(p.copies[k].clone())).collect())?;
                cholesky_of(&c)
            })
            .collect::<Result<_>>()?;
        let xscale = RWM_SCALE / (dx as f64).sqrt();
        ps.par_iter_mut().enumerate().for_each(|(i, p)| {
            let mut r = rng.derive(&[phase::MODEL_NOISE, t as u64, i as u64]).rng();
            for (k, x) in p.copies.iter_mut().enumerate() {
                let cur = model.log_joint(&p.theta, &LatentPoint::Real(x.clone()));
                let prop = step(x, &copy_chols[k], xscale, &mut r);
                let lp = model.log_joint(&p.theta, &LatentPoint::Real(prop.clone()));
                if r.random::<f64>().ln() < lp - cur {
                    *x = prop;
                }
            }
        });

        trace.records.push(IterationRecord {
            iter: t,
            theta: weighted_theta_mean(&ps, &uniform_lw),
            ess,
            accept: accepted as f64 / (n * config.theta_moves).max(1) as f64,
            elapsed_ns: start.elapsed().as_nanos() as u64,
        });
    }
    // theta particles as the final cloud
    trace.final_cloud = Some(ParticleCloud::uniform(
        ps.into_iter().map(|p| LatentPoint::Real(p.theta)).collect(),
    )?);
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{GmmModel, MultimodalModel, ToyGaussianModel};

    #[test]
    fn one_rung_weights_by_the_joint() {
        // with a single rung the estimate is the p_theta(x_1, y)/mu_0 weighted
        // mean of uniform theta draws, which stays inside the box
        let m = ToyGaussianModel::new(vec![0.5, 1.5]);
        let cfg = SmcMmlConfig {
            theta_lo: -2.0,
            theta_hi: 2.0,
            ..SmcMmlConfig::new(200, 1)
        };
        let t = smc_mml(&m, &cfg, &RngStream::new(1)).unwrap();
        assert_eq!(t.iterations(), 1);
        assert!(t.final_theta()[0].abs() <= 2.0);
        assert!(t.records[1].ess <= 200.0);
    }

    #[test]
    fn concentrates_on_the_toy_mle() {
        let m = ToyGaussianModel::new(vec![0.4, 1.1, 0.7, 1.6]);
        let cfg = SmcMmlConfig::new(200, 40);
        let t = smc_mml(&m, &cfg, &RngStream::new(2)).unwrap();
        let star = crate::models::toy_exact_mle(&m.y);
        assert!((t.final_theta()[0] - star).abs() < 0.2, "{} vs {star}", t.final_theta()[0]);
    }

    #[test]
    fn finds_the_global_mode_of_the_multimodal_model() {
        let m = MultimodalModel::default();
        let t = smc_mml(&m, &SmcMmlConfig::new(100, 50), &RngStream::new(3)).unwrap();
        assert!((t.final_theta()[0] - 1.997).abs() < 0.3, "{}", t.final_theta()[0]);
    }

    #[test]
    fn discrete_models_are_rejected() {
        let m = GmmModel::new(vec![1.0], 0.5);
        assert!(matches!(smc_mml(&m, &SmcMmlConfig::new(10, 2), &RngStream::new(4)), Err(Error::LatentMismatch(_))));
    }
}
