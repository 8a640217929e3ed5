//! Mirror descent for latent variable models, realized as an SMC sampler.
//!
//! Two variants share one loop:
//!
//! * `ExactMdLvm` follows the mirror-descent iterates exactly. The target at
//!   iteration n is `mu_0^{c_n} prod_j p_{theta_j}(x, y)^{a_j}` over the whole
//!   parameter history, so each density evaluation costs O(n).
//! * `SmcsLvm` tempers between `mu_0` and the latest joint only:
//!   `mu_0^{c_n} p_{theta_{n-1}}(x, y)^{1 - c_n}`, at constant cost.
//!
//! with `c_n = prod_{k<=n} (1 - gamma_k)`. Each iteration updates theta
//! from the previous cloud, resamples (from n = 2 on), moves particles with a
//! kernel invariant for the previous target and reweights towards the new one.

use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{MirrorMap, ThetaState};
use crate::latent::LatentPoint;
use crate::model::{expected_grad_theta, LatentModel};
use crate::particles::{effective_sample_size, normalize_weights, ParticleCloud};
use crate::rng::{phase, RngStream};
use crate::schedule::StepSchedule;
use crate::smc::{
    adapt_rwm_covariance, adapt_rwm_diagonal, discrete_mutate, multinomial_resample, rwm_mutate, KernelConfig, KernelKind,
    LogLinearTarget, LogTarget, ProposalCovariance, RwmProposal, RWM_SCALE,
};
use crate::trace::{stop_rule, IterationRecord, RunTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    ExactMdLvm,
    SmcsLvm,
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Self::ExactMdLvm => "md-lvm",
            Self::SmcsLvm => "smcs-lvm",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MmleConfig {
    pub schedule: StepSchedule,
    pub mirror_map: MirrorMap,
    pub kernel: KernelConfig,
    pub num_particles: usize,
    pub horizon: usize,
    pub variant: Variant,
    /// Stop early once the stop rule holds at this threshold.
    pub stop_threshold: Option<f64>,
}

impl MmleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_particles < 2 {
            return Err(Error::InvalidConfig("need at least 2 particles".into()));
        }
        if self.schedule.horizon() < self.horizon {
            return Err(Error::InvalidConfig(format!(
                "schedule covers {} steps but the horizon is {}",
                self.schedule.horizon(),
                self.horizon
            )));
        }
        self.kernel.validate()
    }
}

/// Append-only record of `theta_0, ..., theta_n`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ThetaHistory {
    states: Vec<ThetaState>,
}

impl ThetaHistory {
    pub fn new(initial: ThetaState) -> Self {
        Self { states: vec![initial] }
    }

    pub fn push(&mut self, state: ThetaState) {
        self.states.push(state);
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> &ThetaState {
        self.states.last().expect("history starts non-empty")
    }

    pub fn thetas(&self) -> Vec<Vec<f64>> {
        self.states.iter().map(|s| s.theta.clone()).collect()
    }

    pub fn get(&self, n: usize) -> &ThetaState {
        &self.states[n]
    }
}

/// `(grad h)^{-1}(grad h(theta) - gamma * sum_i W^i grad_theta U(theta, X^i))`,
/// followed by the model's projection.
pub fn theta_update<M: LatentModel + ?Sized>(
    map: &MirrorMap,
    theta: &ThetaState,
    cloud: &ParticleCloud,
    model: &M,
    gamma: f64,
) -> Result<ThetaState> {
    let scale = model.theta_gradient_scale();
    let grad: Vec<f64> = expected_grad_theta(model, &theta.theta, cloud)?.into_iter().map(|g| g * scale).collect();
    let stepped = theta.mirror_step(map, &grad, gamma)?;
    let projected = model.project_theta(stepped.theta.clone())?;
    if projected == stepped.theta {
        Ok(stepped)
    } else {
        ThetaState::new(map, projected)
    }
}

/// Target of the exact iteration n, built from `history = theta_0..theta_{n-1}`.
pub fn exact_log_target<'m, M: LatentModel + ?Sized>(
    n: usize,
    history: &[Vec<f64>],
    schedule: &StepSchedule,
    model: &'m M,
) -> LogLinearTarget<'m, M> {
    assert!(history.len() >= n, "exact target {n} needs {n} parameter values");
    let exps = schedule.unrolled_exponents(n);
    let terms = exps.into_iter().zip(history.iter().cloned()).collect();
    LogLinearTarget::new(model, schedule.c(n), terms)
}

/// `gamma_n [log p_{theta_{n-1}}(x, y) - log mu_{n-1}(x)]`, the log incremental
/// weight of the exact sampler, with `history = theta_0..theta_{n-1}`.
pub fn exact_log_weight<'m, M: LatentModel + ?Sized>(
    n: usize,
    history: &[Vec<f64>],
    schedule: &StepSchedule,
    model: &'m M,
) -> LogLinearTarget<'m, M> {
    assert!(n >= 1 && history.len() >= n);
    let g = schedule.gamma(n);
    let prev = exact_log_target(n - 1, history, schedule, model);
    let mut terms = vec![(g, history[n - 1].clone())];
    terms.extend(prev.joint_terms.into_iter().map(|(c, t)| (-g * c, t)));
    LogLinearTarget::new(model, -g * schedule.c(n - 1), terms)
}

/// `c_n log mu_0(x) + (1 - c_n) log p_{theta_{n-1}}(x, y)`.
pub fn smcs_log_target<'m, M: LatentModel + ?Sized>(
    n: usize,
    theta_prev: &[f64],
    schedule: &StepSchedule,
    model: &'m M,
) -> LogLinearTarget<'m, M> {
    let c = schedule.c(n);
    LogLinearTarget::new(model, c, vec![(1.0 - c, theta_prev.to_vec())])
}

/// Log incremental weight of the tempered sampler for n >= 2:
/// `(1 - c_n) log p_{theta_{n-1}} - (1 - c_{n-1}) log p_{theta_{n-2}} - (c_{n-1} - c_n) log mu_0`.
pub fn smcs_log_weight<'m, M: LatentModel + ?Sized>(
    n: usize,
    theta_prev2: &[f64],
    theta_prev: &[f64],
    schedule: &StepSchedule,
    model: &'m M,
) -> LogLinearTarget<'m, M> {
    assert!(n >= 2, "the tempered weight starts at n = 2");
    let (c_n, c_prev) = (schedule.c(n), schedule.c(n - 1));
    LogLinearTarget::new(
        model,
        -(c_prev - c_n),
        vec![(1.0 - c_n, theta_prev.to_vec()), (-(1.0 - c_prev), theta_prev2.to_vec())],
    )
}

/// How theta evolves inside the sampler loop.
enum ThetaDriver<'a> {
    MirrorDescent,
    /// Prescribed `theta_0..theta_T`; isolates the particle approximation.
    Fixed(&'a [Vec<f64>]),
}

/// Runs MD-LVM or SMCs-LVM for `config.horizon` iterations from `theta0`.
pub fn run_mmle<M: LatentModel + ?Sized>(
    model: &M,
    config: &MmleConfig,
    theta0: &[f64],
    rng: &RngStream,
) -> Result<RunTrace> {
    run_loop(model, config, theta0, rng, ThetaDriver::MirrorDescent)
}

/// The same sampler with a prescribed parameter sequence `thetas[0..=T]`.
pub fn run_with_fixed_thetas<M: LatentModel + ?Sized>(
    model: &M,
    config: &MmleConfig,
    thetas: &[Vec<f64>],
    rng: &RngStream,
) -> Result<RunTrace> {
    if thetas.len() < config.horizon + 1 {
        return Err(Error::InvalidConfig(format!(
            "{} parameter values supplied for {} iterations",
            thetas.len(),
            config.horizon
        )));
    }
    run_loop(model, config, &thetas[0], rng, ThetaDriver::Fixed(thetas))
}

/// Draws `n` particles from `mu_0`, one stream per particle.
pub fn sample_initial_cloud<M: LatentModel + ?Sized>(model: &M, n: usize, rng: &RngStream) -> Result<ParticleCloud> {
    let particles: Vec<LatentPoint> = (0..n)
        .into_par_iter()
        .map(|i| model.sample_prior0(&mut rng.derive(&[phase::INIT, i as u64]).rng()))
        .collect();
    ParticleCloud::uniform(particles)
}

/// Applies the configured kernel, invariant for `target`, to `cloud`.
/// `spread` is the cloud the adaptive covariance is estimated from.
pub fn apply_kernel<M: LatentModel + ?Sized, T: LogTarget + ?Sized>(
    model: &M,
    kernel: &KernelConfig,
    cloud: &ParticleCloud,
    spread: &ParticleCloud,
    target: &T,
    rng: &RngStream,
) -> Result<(ParticleCloud, f64)> {
    let space = model.latent_space();
    match &kernel.kind {
        KernelKind::RandomWalk { step_scale, covariance } => {
            if space.is_discrete() {
                return Err(Error::LatentMismatch("random walk kernel on a discrete space".into()));
            }
            let d = space.dim();
            let cov = match covariance {
                ProposalCovariance::Adaptive => adapt_rwm_covariance(spread)?,
                ProposalCovariance::AdaptiveDiagonal => adapt_rwm_diagonal(spread)?,
                ProposalCovariance::Identity(s) => nalgebra::DMatrix::identity(d, d) * *s,
                ProposalCovariance::Fixed(m) => m.clone(),
            };
            let scale = step_scale.unwrap_or(RWM_SCALE / (d as f64).sqrt());
            let proposal = RwmProposal::new(scale, &cov)?;
            rwm_mutate(cloud, target, &proposal, kernel.mcmc_steps, rng)
        }
        KernelKind::DiscreteSingleSite { proposal } => {
            let q = space
                .num_categories()
                .ok_or_else(|| Error::LatentMismatch("discrete kernel on a continuous space".into()))?;
            let laws: Option<Vec<Vec<f64>>> = (0..space.dim()).map(|i| model.category_law(i)).collect();
            discrete_mutate(cloud, target, q, *proposal, laws.as_deref(), kernel.mcmc_steps, rng)
        }
    }
}

fn run_loop<M: LatentModel + ?Sized>(
    model: &M,
    config: &MmleConfig,
    theta0: &[f64],
    rng: &RngStream,
    driver: ThetaDriver<'_>,
) -> Result<RunTrace> {
    config.validate()?;
    if theta0.len() != model.theta_dim() {
        return Err(Error::LengthMismatch {
            left: theta0.len(),
            right: model.theta_dim(),
        });
    }
    let start = Instant::now();
    let map = &config.mirror_map;
    let schedule = &config.schedule;
    let theta0 = match driver {
        ThetaDriver::MirrorDescent => model.project_theta(theta0.to_vec())?,
        ThetaDriver::Fixed(_) => theta0.to_vec(),
    };
    let mut history = ThetaHistory::new(ThetaState::new(map, theta0)?);
    let mut cloud = sample_initial_cloud(model, config.num_particles, rng)?;

    let mut trace = RunTrace::default();
    trace.meta("algorithm", config.variant.name());
    trace.meta("particles", config.num_particles);
    trace.meta("horizon", config.horizon);
    trace.meta("mirror_map", format!("{map:?}"));
    trace.meta("kernel", format!("{:?}", config.kernel.kind));
    trace.meta("mcmc_steps", config.kernel.mcmc_steps);
    trace.meta("seed", rng.seed);
    trace.meta("stream", rng.stream_id);
    trace.records.push(IterationRecord {
        iter: 0,
        theta: history.last().theta.clone(),
        ess: effective_sample_size(&cloud)?,
        accept: f64::NAN,
        elapsed_ns: start.elapsed().as_nanos() as u64,
    });

    for n in 1..=config.horizon {
        let next = match driver {
            ThetaDriver::MirrorDescent => theta_update(map, history.last(), &cloud, model, schedule.gamma(n))?,
            ThetaDriver::Fixed(ts) => ThetaState::new(map, ts[n].clone())?,
        };

        let spread = cloud.clone();
        if n > 1 {
            cloud = multinomial_resample(&cloud, &rng.derive(&[phase::RESAMPLE, n as u64]))?;
        }

        // thetas known before this iteration's update: theta_0..theta_{n-1}
        let known = history.thetas();
        let (moved, accept) = {
            let mutate_rng = rng.derive(&[phase::MUTATE, n as u64]);
            match config.variant {
                Variant::ExactMdLvm => {
                    let target = exact_log_target(n - 1, &known, schedule, model);
                    apply_kernel(model, &config.kernel, &cloud, &spread, &target, &mutate_rng)?
                }
                Variant::SmcsLvm => {
                    let target = if n == 1 {
                        LogLinearTarget::new(model, 1.0, vec![])
                    } else {
                        smcs_log_target(n - 1, &known[n - 2], schedule, model)
                    };
                    apply_kernel(model, &config.kernel, &cloud, &spread, &target, &mutate_rng)?
                }
            }
        };

        let increments: Vec<f64> = match config.variant {
            Variant::SmcsLvm if n >= 2 => {
                let w = smcs_log_weight(n, &known[n - 2], &known[n - 1], schedule, model);
                evaluate(&w, &moved.particles)
            }
            _ => {
                let w = exact_log_weight(n, &known, schedule, model);
                evaluate(&w, &moved.particles)
            }
        };
        let log_weights = moved.log_weights.iter().zip(&increments).map(|(a, b)| a + b).collect();
        cloud = normalize_weights(ParticleCloud::weighted(moved.particles, log_weights)?).map_err(|e| match e {
            Error::AllWeightsDegenerate => Error::WeightCollapse { iteration: n },
            other => other,
        })?;

        history.push(next);
        trace.records.push(IterationRecord {
            iter: n,
            theta: history.last().theta.clone(),
            ess: effective_sample_size(&cloud)?,
            accept,
            elapsed_ns: start.elapsed().as_nanos() as u64,
        });
        if let Some(threshold) = config.stop_threshold {
            if stop_rule(&trace.records, threshold) {
                break;
            }
        }
    }
    trace.final_cloud = Some(cloud);
    Ok(trace)
}

fn evaluate<T: LogTarget + ?Sized>(target: &T, particles: &[LatentPoint]) -> Vec<f64> {
    particles.par_iter().map(|x| target.log_density(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::toy::ToyGaussianModel;
    use approx::assert_relative_eq;

    fn toy() -> ToyGaussianModel {
        ToyGaussianModel::new(vec![0.4, -1.2, 2.0])
    }

    #[test]
    fn zero_gradient_is_a_fixed_point() {
        // toy with d_x = 1, y arbitrary; particles at theta give zero gradient
        let m = ToyGaussianModel::new(vec![3.0]);
        let map = MirrorMap::SquaredNorm;
        let cloud = ParticleCloud::uniform(vec![LatentPoint::Real(vec![0.7]); 4]).unwrap();
        let s = ThetaState::new(&map, vec![0.7]).unwrap();
        let next = theta_update(&map, &s, &cloud, &m, 0.3).unwrap();
        assert_eq!(next.theta, vec![0.7]);
    }

    #[test]
    fn toy_gradient_step_by_hand() {
        let m = ToyGaussianModel::new(vec![0.0]);
        let map = MirrorMap::SquaredNorm;
        let cloud = ParticleCloud::uniform(vec![LatentPoint::Real(vec![1.0]), LatentPoint::Real(vec![3.0])]).unwrap();
        let s = ThetaState::new(&map, vec![0.0]).unwrap();
        let next = theta_update(&map, &s, &cloud, &m, 0.1).unwrap();
        assert_relative_eq!(next.theta[0], 0.2, epsilon = 1e-15);
    }

    /// Model with a constant gradient, to drive the barrier map directly.
    struct ConstGrad(f64);
    impl LatentModel for ConstGrad {
        fn latent_space(&self) -> crate::latent::LatentSpace {
            crate::latent::LatentSpace::Continuous { dim: 1 }
        }
        fn theta_dim(&self) -> usize {
            1
        }
        fn log_joint(&self, theta: &[f64], _x: &LatentPoint) -> f64 {
            -self.0 * theta[0]
        }
        fn grad_theta_u(&self, _theta: &[f64], _x: &LatentPoint) -> Vec<f64> {
            vec![self.0]
        }
        fn log_prior0(&self, _x: &LatentPoint) -> f64 {
            0.0
        }
        fn sample_prior0(&self, _rng: &mut crate::rng::SmcRng) -> LatentPoint {
            LatentPoint::Real(vec![0.0])
        }
    }

    #[test]
    fn barrier_step_chains_the_inverse_map() {
        let map = MirrorMap::ComponentLogBarrier;
        let cloud = ParticleCloud::uniform(vec![LatentPoint::Real(vec![0.0]); 3]).unwrap();
        let s = ThetaState::new(&map, vec![0.5]).unwrap();
        let next = theta_update(&map, &s, &cloud, &ConstGrad(37.5), 0.1).unwrap();
        assert_relative_eq!(next.theta[0], 0.2, epsilon = 1e-14);
    }

    #[test]
    fn exact_target_at_zero_is_mu0() {
        let m = toy();
        let s = StepSchedule::constant(0.1, 10).unwrap();
        let t = exact_log_target(0, &[], &s, &m);
        let x = LatentPoint::Real(vec![0.3, 0.1, -2.0]);
        assert_eq!(t.log_density(&x), m.log_prior0(&x));
    }

    #[test]
    fn exact_exponents_example() {
        let m = toy();
        let s = StepSchedule::constant(0.1, 10).unwrap();
        let t = exact_log_target(2, &[vec![0.0], vec![1.0]], &s, &m);
        assert_relative_eq!(t.mu0_coeff, 0.81, epsilon = 1e-15);
        assert_relative_eq!(t.joint_terms[0].0, 0.09, epsilon = 1e-15);
        assert_relative_eq!(t.joint_terms[1].0, 0.1, epsilon = 1e-15);
    }

    #[test]
    fn exponents_sum_to_one_for_every_n() {
        let m = toy();
        for s in [StepSchedule::constant(0.07, 60).unwrap(), StepSchedule::harmonic(60).unwrap()] {
            let hist: Vec<Vec<f64>> = (0..60).map(|k| vec![k as f64 * 0.01]).collect();
            for n in 0..=60 {
                let t = exact_log_target(n, &hist, &s, &m);
                assert!((t.exponent_sum() - 1.0).abs() < 1e-12);
                if n >= 1 {
                    assert!((smcs_log_target(n, &hist[n - 1], &s, &m).exponent_sum() - 1.0).abs() < 1e-12);
                    // weights are differences of two targets
                    assert!(exact_log_weight(n, &hist, &s, &m).exponent_sum().abs() < 1e-12);
                }
                if n >= 2 {
                    assert!(smcs_log_weight(n, &hist[n - 2], &hist[n - 1], &s, &m).exponent_sum().abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn smcs_weight_exponents_example() {
        let m = toy();
        let s = StepSchedule::constant(0.1, 10).unwrap();
        let w = smcs_log_weight(2, &[0.0], &[1.0], &s, &m);
        assert_relative_eq!(w.joint_terms[0].0, 0.19, epsilon = 1e-15);
        assert_relative_eq!(w.joint_terms[1].0, -0.1, epsilon = 1e-15);
        assert_relative_eq!(w.mu0_coeff, -0.09, epsilon = 1e-15);
        let t = smcs_log_target(3, &[1.0], &s, &m);
        assert_relative_eq!(t.mu0_coeff, 0.729, epsilon = 1e-15);
        assert_relative_eq!(t.joint_terms[0].0, 0.271, epsilon = 1e-15);
    }

    #[test]
    fn zero_step_weight_is_flat() {
        let m = toy();
        let s = StepSchedule::constant(1e-300, 3).unwrap();
        let w = exact_log_weight(1, &[vec![0.5]], &s, &m);
        let x = LatentPoint::Real(vec![0.3, 0.1, -2.0]);
        assert!(w.log_density(&x).abs() < 1e-290);
    }

    #[test]
    fn first_weight_formula() {
        let m = toy();
        let s = StepSchedule::constant(0.3, 3).unwrap();
        let w = exact_log_weight(1, &[vec![0.5]], &s, &m);
        let x = LatentPoint::Real(vec![0.3, 0.1, -2.0]);
        let expect = 0.3 * (m.log_joint(&[0.5], &x) - m.log_prior0(&x));
        assert_relative_eq!(w.log_density(&x), expect, epsilon = 1e-12);
    }

    #[test]
    fn variants_agree_at_first_iteration() {
        let m = toy();
        let s = StepSchedule::constant(0.1, 3).unwrap();
        let hist = vec![vec![0.8]];
        let mut r = RngStream::new(3).rng();
        for _ in 0..50 {
            let x = m.sample_prior0(&mut r);
            let a = exact_log_target(1, &hist, &s, &m).log_density(&x);
            let b = smcs_log_target(1, &hist[0], &s, &m).log_density(&x);
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn full_step_saturates_the_tempered_target() {
        let m = toy();
        let s = StepSchedule::constant(1.0, 5).unwrap();
        let mut r = RngStream::new(4).rng();
        for n in 1..=5 {
            let t = smcs_log_target(n, &[0.4], &s, &m);
            let x = m.sample_prior0(&mut r);
            assert_eq!(t.mu0_coeff, 0.0);
            assert_relative_eq!(t.log_density(&x), m.log_joint(&[0.4], &x), epsilon = 1e-12);
        }
    }

    #[test]
    fn target_difference_matches_weight_up_to_constant() {
        let m = toy();
        let s = StepSchedule::constant(0.13, 20).unwrap();
        let hist: Vec<Vec<f64>> = (0..20).map(|k| vec![(k as f64 * 0.37).sin()]).collect();
        let mut r = RngStream::new(5).rng();
        for n in [1usize, 2, 7, 19] {
            let diffs: Vec<f64> = (0..100)
                .map(|_| {
                    let x = m.sample_prior0(&mut r);
                    exact_log_target(n, &hist, &s, &m).log_density(&x)
                        - exact_log_target(n - 1, &hist, &s, &m).log_density(&x)
                        - exact_log_weight(n, &hist, &s, &m).log_density(&x)
                })
                .collect();
            let range = diffs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                - diffs.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!(range < 1e-9, "n={n}: range {range}");
        }
    }

    #[test]
    fn zero_iterations_return_the_initial_state() {
        let m = toy();
        let cfg = MmleConfig {
            schedule: StepSchedule::constant(0.1, 0).unwrap(),
            mirror_map: MirrorMap::SquaredNorm,
            kernel: KernelConfig::adaptive_rwm(),
            num_particles: 20,
            horizon: 0,
            variant: Variant::SmcsLvm,
            stop_threshold: None,
        };
        let t = run_mmle(&m, &cfg, &[0.25], &RngStream::new(1)).unwrap();
        assert_eq!(t.records.len(), 1);
        assert_eq!(t.final_theta(), &[0.25]);
        assert_eq!(t.final_cloud.unwrap().len(), 20);
    }

    #[test]
    fn runs_are_deterministic() {
        let m = toy();
        let cfg = MmleConfig {
            schedule: StepSchedule::constant(0.1, 15).unwrap(),
            mirror_map: MirrorMap::SquaredNorm,
            kernel: KernelConfig::adaptive_rwm(),
            num_particles: 30,
            horizon: 15,
            variant: Variant::ExactMdLvm,
            stop_threshold: None,
        };
        let a = run_mmle(&m, &cfg, &[0.0], &RngStream::new(9)).unwrap();
        let b = run_mmle(&m, &cfg, &[0.0], &RngStream::new(9)).unwrap();
        assert_eq!(a.thetas(), b.thetas());
        assert_eq!(a.final_cloud, b.final_cloud);
    }

    #[test]
    fn stop_threshold_ends_the_run() {
        let m = toy();
        let cfg = MmleConfig {
            schedule: StepSchedule::constant(0.5, 500).unwrap(),
            mirror_map: MirrorMap::SquaredNorm,
            kernel: KernelConfig::adaptive_rwm(),
            num_particles: 20,
            horizon: 500,
            variant: Variant::SmcsLvm,
            stop_threshold: Some(1e300),
        };
        let t = run_mmle(&m, &cfg, &[0.0], &RngStream::new(2)).unwrap();
        assert_eq!(t.iterations(), 1);
    }
}
