//! Named end-to-end checks of the samplers against exact references.
//!
//! * `toy-recursion`: MD-LVM on the toy Gaussian against its
//!   infinite-particle recursion.
//! * `sbm-enumeration`: SMCs-LVM clouds on a four-node SBM against the
//!   enumerated tempered targets, for a prescribed parameter history.
//! * `rate-sweep`: Monte Carlo error of the final parameter against the
//!   recursion, as a function of the particle count.
//! * `ratio-identity`: the difference between the exact and tempered log
//!   targets against its closed form in the parameter history.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use crate::diagnostics::{enumerate_target, loglog_slope, toy_exact_recursion};
use crate::error::{Error, Result};
use crate::geometry::MirrorMap;
use crate::latent::LatentPoint;
use crate::mmle::{exact_log_target, run_mmle, run_with_fixed_thetas, smcs_log_target, MmleConfig, Variant};
use crate::model::LatentModel;
use crate::models::{sbm_theta, SbmGraph, SbmModel, ToyGaussianModel};
use crate::rng::{phase, RngStream};
use crate::schedule::StepSchedule;
use crate::smc::{CategoryProposal, KernelConfig, KernelKind, LogTarget, ProposalCovariance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleCheck {
    ToyRecursion,
    SbmEnumeration,
    RateSweep,
    RatioIdentity,
}

impl OracleCheck {
    pub const ALL: [OracleCheck; 4] = [Self::ToyRecursion, Self::SbmEnumeration, Self::RateSweep, Self::RatioIdentity];

    pub fn name(&self) -> &'static str {
        match self {
            Self::ToyRecursion => "toy-recursion",
            Self::SbmEnumeration => "sbm-enumeration",
            Self::RateSweep => "rate-sweep",
            Self::RatioIdentity => "ratio-identity",
        }
    }
}

impl FromStr for OracleCheck {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownCheck(s.to_string()))
    }
}

/// Outcome of one check: the measured quantities and the verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub check: OracleCheck,
    pub passed: bool,
    pub measurements: Vec<(String, f64)>,
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.check.name(), if self.passed { "PASS" } else { "FAIL" })?;
        for (k, v) in &self.measurements {
            write!(f, " {k}={v:.6e}")?;
        }
        Ok(())
    }
}

/// Runs a check with its default settings.
pub fn run_oracle(check: OracleCheck, seed: u64) -> Result<OracleReport> {
    match check {
        OracleCheck::ToyRecursion => toy_recursion_check(&ToyRecursionSettings::default(), seed),
        OracleCheck::SbmEnumeration => sbm_enumeration_check(&SbmEnumerationSettings::default(), seed),
        OracleCheck::RateSweep => rate_sweep_check(&RateSweepSettings::default(), seed),
        OracleCheck::RatioIdentity => ratio_identity_check(seed),
    }
}

fn toy_data(dim: usize, seed: u64) -> ToyGaussianModel {
    ToyGaussianModel::simulate(1.0, dim, &mut RngStream::new(seed).derive(&[phase::DATA]).rng())
}

/// Random walk steps per iteration on the toy model. One step lets the
/// resampled cloud lose spread faster than the walk restores it.
pub const TOY_MCMC_STEPS: usize = 5;

fn toy_config(gamma: f64, horizon: usize, particles: usize) -> Result<MmleConfig> {
    Ok(MmleConfig {
        schedule: StepSchedule::constant(gamma, horizon)?,
        mirror_map: MirrorMap::SquaredNorm,
        kernel: KernelConfig {
            kind: KernelKind::RandomWalk {
                step_scale: None,
                covariance: ProposalCovariance::AdaptiveDiagonal,
            },
            mcmc_steps: TOY_MCMC_STEPS,
        },
        num_particles: particles,
        horizon,
        variant: Variant::ExactMdLvm,
        stop_threshold: None,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ToyRecursionSettings {
    pub dim: usize,
    pub particles: usize,
    pub horizon: usize,
    pub gamma: f64,
    pub theta0: f64,
    pub tolerance: f64,
}

impl Default for ToyRecursionSettings {
    fn default() -> Self {
        Self {
            dim: 50,
            particles: 10_000,
            horizon: 200,
            gamma: 0.01,
            theta0: 0.0,
            tolerance: 0.05,
        }
    }
}

/// Largest `|theta_n^N - theta_n|` over the run.
pub fn toy_recursion_check(s: &ToyRecursionSettings, seed: u64) -> Result<OracleReport> {
    let model = toy_data(s.dim, seed);
    let config = toy_config(s.gamma, s.horizon, s.particles)?;
    let trace = run_mmle(&model, &config, &[s.theta0], &RngStream::new(seed))?;
    let (exact, _) = toy_exact_recursion(s.theta0, &config.schedule, &model, s.horizon);
    let max_dev = trace
        .records
        .iter()
        .zip(&exact)
        .map(|(r, t)| (r.theta[0] - t).abs())
        .fold(0.0, f64::max);
    Ok(OracleReport {
        check: OracleCheck::ToyRecursion,
        passed: max_dev < s.tolerance,
        measurements: vec![
            ("max_abs_deviation".into(), max_dev),
            ("final_theta".into(), trace.final_theta()[0]),
            ("final_theta_exact".into(), exact[s.horizon]),
        ],
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SbmEnumerationSettings {
    pub particles: usize,
    pub gamma: f64,
    pub checkpoints: Vec<usize>,
    pub tolerance: f64,
}

impl Default for SbmEnumerationSettings {
    fn default() -> Self {
        Self {
            particles: 10_000,
            gamma: 0.2,
            checkpoints: vec![1, 5, 10],
            tolerance: 0.05,
        }
    }
}

/// Four nodes with two blocks, 16 latent states.
pub fn tiny_sbm() -> SbmModel {
    let graph = SbmGraph::new(4, &[(0, 1), (1, 2), (2, 3)]).expect("valid edge list");
    SbmModel::new(graph, 2).expect("two blocks")
}

/// A slowly drifting parameter path `theta_0..theta_horizon` for the tiny SBM.
pub fn tiny_sbm_history(horizon: usize) -> Vec<Vec<f64>> {
    (0..=horizon)
        .map(|k| {
            let s = k as f64 / horizon.max(1) as f64;
            let p1 = 0.5 + 0.2 * s;
            sbm_theta(&[p1, 1.0 - p1], &[0.8 - 0.1 * s, 0.2, 0.2, 0.7 + 0.2 * s])
        })
        .collect()
}

/// Total variation between the SMCs-LVM cloud at each checkpoint and the
/// enumerated target `mu_0^{c_n} p_{theta_{n-1}}^{1 - c_n}`.
pub fn sbm_enumeration_check(s: &SbmEnumerationSettings, seed: u64) -> Result<OracleReport> {
    let model = tiny_sbm();
    let horizon = s.checkpoints.iter().copied().max().unwrap_or(0);
    let thetas = tiny_sbm_history(horizon);
    let schedule = StepSchedule::constant(s.gamma, horizon)?;
    let mut measurements = Vec::new();
    let mut passed = true;
    for &n in &s.checkpoints {
        let config = MmleConfig {
            schedule: schedule.clone(),
            mirror_map: MirrorMap::ComponentLogBarrier,
            kernel: KernelConfig::discrete(CategoryProposal::Uniform),
            num_particles: s.particles,
            horizon: n,
            variant: Variant::SmcsLvm,
            stop_threshold: None,
        };
        let trace = run_with_fixed_thetas(&model, &config, &thetas, &RngStream::with_stream(seed, n as u64))?;
        let target = smcs_log_target(n, &thetas[n - 1], &schedule, &model);
        let exact = enumerate_target(&target, &model.latent_space())?;
        let cloud = trace.final_cloud.as_ref().expect("run keeps its final cloud");
        let tv = exact.total_variation(cloud)?;
        passed &= tv < s.tolerance;
        measurements.push((format!("tv_n{n}"), tv));
    }
    Ok(OracleReport {
        check: OracleCheck::SbmEnumeration,
        passed,
        measurements,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateSweepSettings {
    pub dim: usize,
    pub horizon: usize,
    pub gamma: f64,
    pub particle_counts: Vec<usize>,
    pub replications: usize,
    pub slope_target: f64,
    pub slope_tolerance: f64,
}

impl Default for RateSweepSettings {
    fn default() -> Self {
        Self {
            dim: 10,
            horizon: 50,
            gamma: 0.05,
            particle_counts: vec![25, 100, 400],
            replications: 50,
            slope_target: -0.5,
            slope_tolerance: 0.2,
        }
    }
}

/// RMSE of `theta_T` around the recursion at each particle count and the
/// fitted log-log slope.
pub fn rate_sweep_check(s: &RateSweepSettings, seed: u64) -> Result<OracleReport> {
    let model = toy_data(s.dim, seed);
    let theta0 = 0.0;
    let mut measurements = Vec::new();
    let mut rmses = Vec::new();
    for &n in &s.particle_counts {
        let config = toy_config(s.gamma, s.horizon, n)?;
        let (exact, _) = toy_exact_recursion(theta0, &config.schedule, &model, s.horizon);
        let truth = exact[s.horizon];
        let sq: Vec<f64> = (0..s.replications)
            .into_par_iter()
            .map(|r| {
                let rng = RngStream::with_stream(seed.wrapping_add(r as u64), n as u64);
                run_mmle(&model, &config, &[theta0], &rng).map(|t| (t.final_theta()[0] - truth).powi(2))
            })
            .collect::<Result<_>>()?;
        let rmse = (sq.iter().sum::<f64>() / sq.len() as f64).sqrt();
        measurements.push((format!("rmse_n{n}"), rmse));
        rmses.push(rmse);
    }
    let xs: Vec<f64> = s.particle_counts.iter().map(|&n| n as f64).collect();
    let slope = loglog_slope(&xs, &rmses);
    measurements.push(("slope".into(), slope));
    Ok(OracleReport {
        check: OracleCheck::RateSweep,
        passed: (slope - s.slope_target).abs() <= s.slope_tolerance,
        measurements,
    })
}

/// Largest spread over random `x` of
/// `exact_log_target(n) - smcs_log_target(n) - sum_k w_k [log p_{theta_k} - log p_{theta_{n-1}}]`
/// with `w_k = gamma_{k+1} prod_{j=k+2}^{n} (1 - gamma_j)`, over random
/// histories, horizons and harmonic or constant schedules.
pub fn ratio_identity_residual(seed: u64) -> Result<f64> {
    const HORIZON: usize = 25;
    let model = toy_data(8, seed);
    let mut r = RngStream::new(seed).derive(&[phase::AUX]).rng();
    let schedules = [
        StepSchedule::constant(0.1, HORIZON)?,
        StepSchedule::constant(0.7, HORIZON)?,
        StepSchedule::harmonic(HORIZON)?,
    ];
    let mut worst: f64 = 0.0;
    for schedule in &schedules {
        let history: Vec<Vec<f64>> = (0..HORIZON).map(|_| vec![r.random_range(-3.0..3.0)]).collect();
        for n in 1..=HORIZON {
            let exact = exact_log_target(n, &history, schedule, &model);
            let tempered = smcs_log_target(n, &history[n - 1], schedule, &model);
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for _ in 0..20 {
                let x = LatentPoint::Real((0..model.dim()).map(|_| r.random_range(-4.0..4.0)).collect());
                let last = model.log_joint(&history[n - 1], &x);
                let closed: f64 = (0..n.saturating_sub(1))
                    .map(|k| {
                        let w = schedule.gamma(k + 1) * ((k + 2)..=n).map(|j| 1.0 - schedule.gamma(j)).product::<f64>();
                        w * (model.log_joint(&history[k], &x) - last)
                    })
                    .sum();
                let resid = exact.log_density(&x) - tempered.log_density(&x) - closed;
                lo = lo.min(resid);
                hi = hi.max(resid);
            }
            worst = worst.max(hi - lo);
        }
    }
    Ok(worst)
}

pub fn ratio_identity_check(seed: u64) -> Result<OracleReport> {
    let residual = ratio_identity_residual(seed)?;
    Ok(OracleReport {
        check: OracleCheck::RatioIdentity,
        passed: residual < 1e-9,
        measurements: vec![("residual_range".into(), residual)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_names_round_trip() {
        for c in OracleCheck::ALL {
            assert_eq!(c.name().parse::<OracleCheck>().unwrap(), c);
        }
        assert_eq!("bogus".parse::<OracleCheck>(), Err(Error::UnknownCheck("bogus".into())));
    }

    #[test]
    fn ratio_identity_holds() {
        let rep = ratio_identity_check(3).unwrap();
        assert!(rep.passed, "{rep}");
    }

    #[test]
    fn history_stays_in_the_barrier_domain() {
        for t in tiny_sbm_history(10) {
            assert!(t.iter().all(|v| *v > 0.0 && *v < 1.0));
        }
    }

    #[test]
    fn small_enumeration_check_runs() {
        let s = SbmEnumerationSettings {
            particles: 4000,
            checkpoints: vec![1, 3],
            tolerance: 0.1,
            ..Default::default()
        };
        let rep = sbm_enumeration_check(&s, 1).unwrap();
        assert!(rep.passed, "{rep}");
    }

    #[test]
    fn report_lists_measurements() {
        let rep = OracleReport {
            check: OracleCheck::RateSweep,
            passed: false,
            measurements: vec![("slope".into(), -0.1)],
        };
        assert_eq!(rep.to_string(), "rate-sweep FAIL slope=-1.000000e-1");
    }
}
