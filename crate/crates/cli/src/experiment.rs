//! Turns a parsed configuration into model instances and algorithm runs.

use std::time::Instant;

use smc_mmle::baselines::{
    em_gmm, run_langevin, saem_labels, saem_sbm, smc_mml, LangevinConfig, LangevinVariant, SaemConfig, SmcMmlConfig,
};
use smc_mmle::diagnostics::{adjusted_rand_index, posterior_mode_labels};
use smc_mmle::models::{
    sbm_theta, BlrModel, GmmModel, MultimodalModel, SbmGraph, SbmModel, ToyGaussianModel, KARATE_FACTIONS,
};
use smc_mmle::rng::phase;
use smc_mmle::{
    run_mmle, CategoryProposal, Error, KernelConfig, KernelKind, LatentModel, MirrorMap, MmleConfig,
    ProposalCovariance, Result, RngStream, RunTrace, StepSchedule, Variant,
};

use crate::config::{
    AlgorithmKind, AlgorithmSpec, GraphSource, KernelChoice, MirrorKind, ModelSection, ModelSpec, ScheduleKind,
};

pub enum BuiltModel {
    Toy(ToyGaussianModel),
    Gmm(GmmModel),
    Multimodal(MultimodalModel),
    Blr(BlrModel),
    Sbm(SbmModel),
}

/// A model instance with its reference values for scoring.
pub struct Instance {
    pub model: BuiltModel,
    pub truth: Option<Vec<f64>>,
    pub labels: Option<Vec<usize>>,
}

impl BuiltModel {
    pub fn as_dyn(&self) -> &dyn LatentModel {
        match self {
            Self::Toy(m) => m,
            Self::Gmm(m) => m,
            Self::Multimodal(m) => m,
            Self::Blr(m) => m,
            Self::Sbm(m) => m,
        }
    }
}

pub fn build_model(section: &ModelSection) -> Result<Instance> {
    let mut rng = RngStream::new(section.data_seed).derive(&[phase::DATA]).rng();
    let (model, reference, labels) = match &section.spec {
        ModelSpec::Toy { dim, theta } => {
            let m = ToyGaussianModel::simulate(*theta, *dim, &mut rng);
            let mle = smc_mmle::models::toy_exact_mle(&m.y);
            (BuiltModel::Toy(m), Some(vec![mle]), None)
        }
        ModelSpec::Gmm { points, alpha, theta } => {
            let data = GmmModel::simulate(*theta, *alpha, *points, &mut rng);
            (BuiltModel::Gmm(GmmModel::new(data, *alpha)), Some(vec![*theta]), None)
        }
        ModelSpec::Multimodal { data, shape, rate } => {
            let m = MultimodalModel::new(data.clone(), *shape, *rate);
            let lo = data.iter().cloned().fold(f64::INFINITY, f64::min) - 5.0;
            let hi = data.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 5.0;
            let best = m.global_maximizer(lo, hi);
            (BuiltModel::Multimodal(m), Some(vec![best]), None)
        }
        ModelSpec::Blr { points, theta } => {
            (BuiltModel::Blr(BlrModel::simulate(theta, *points, &mut rng)), Some(theta.clone()), None)
        }
        ModelSpec::Sbm { graph, blocks } => {
            let (g, reference, labels) = match graph {
                GraphSource::Karate => (SbmGraph::karate(), None, Some(KARATE_FACTIONS.to_vec())),
                GraphSource::File(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
                    (SbmGraph::parse_edge_list(&text, None)?, None, None)
                }
                GraphSource::Simulated { nodes, p, nu } => {
                    let (g, labels) = SbmGraph::simulate(*nodes, p, nu, &mut rng)?;
                    (g, Some(sbm_theta(p, nu)), Some(labels))
                }
            };
            (BuiltModel::Sbm(SbmModel::new(g, *blocks)?), reference, labels)
        }
    };
    Ok(Instance {
        model,
        truth: section.truth.clone().or(reference),
        labels,
    })
}

fn schedule(spec: &AlgorithmSpec) -> Result<StepSchedule> {
    match spec.schedule {
        ScheduleKind::Constant => StepSchedule::constant(spec.gamma, spec.horizon),
        ScheduleKind::Harmonic => StepSchedule::harmonic(spec.horizon),
    }
}

fn kernel(spec: &AlgorithmSpec) -> KernelConfig {
    let kind = match spec.kernel {
        KernelChoice::Rwm => KernelKind::RandomWalk {
            step_scale: None,
            covariance: ProposalCovariance::Adaptive,
        },
        KernelChoice::RwmDiagonal => KernelKind::RandomWalk {
            step_scale: None,
            covariance: ProposalCovariance::AdaptiveDiagonal,
        },
        KernelChoice::Uniform => KernelKind::DiscreteSingleSite {
            proposal: CategoryProposal::Uniform,
        },
        KernelChoice::Prior => KernelKind::DiscreteSingleSite {
            proposal: CategoryProposal::Prior,
        },
    };
    KernelConfig {
        kind,
        mcmc_steps: spec.mcmc_steps,
    }
}

fn mirror(spec: &AlgorithmSpec, theta_dim: usize) -> MirrorMap {
    match spec.mirror {
        MirrorKind::SquaredNorm => MirrorMap::SquaredNorm,
        MirrorKind::LogBarrier => MirrorMap::ComponentLogBarrier,
        MirrorKind::Entropy => MirrorMap::SimplexEntropy { block: 0..theta_dim },
    }
}

fn wrong_model(spec: &AlgorithmSpec, needs: &str) -> Error {
    Error::InvalidConfig(format!("algorithm `{}` needs the {needs} model", spec.kind.name()))
}

/// One algorithm run on one replication, with its scores.
pub struct RunOutcome {
    pub trace: RunTrace,
    pub runtime_seconds: f64,
    pub mse: Option<f64>,
    pub ari: Option<f64>,
}

pub fn run_algorithm(instance: &Instance, spec: &AlgorithmSpec, seed: u64) -> Result<RunOutcome> {
    let rng = RngStream::new(seed);
    let model = instance.model.as_dyn();
    let start = Instant::now();
    let trace = match spec.kind {
        AlgorithmKind::MdLvm | AlgorithmKind::SmcsLvm => {
            let config = MmleConfig {
                schedule: schedule(spec)?,
                mirror_map: mirror(spec, model.theta_dim()),
                kernel: kernel(spec),
                num_particles: spec.particles,
                horizon: spec.horizon,
                variant: if spec.kind == AlgorithmKind::MdLvm {
                    Variant::ExactMdLvm
                } else {
                    Variant::SmcsLvm
                },
                stop_threshold: spec.stop_threshold,
            };
            run_mmle(model, &config, &spec.theta0, &rng)?
        }
        AlgorithmKind::Em => match &instance.model {
            BuiltModel::Gmm(m) => em_gmm(&m.data, m.alpha, spec.theta0[0], spec.horizon),
            _ => return Err(wrong_model(spec, "gmm")),
        },
        AlgorithmKind::Saem => match &instance.model {
            BuiltModel::Sbm(m) => {
                let config = SaemConfig {
                    schedule: schedule(spec)?,
                    horizon: spec.horizon,
                    sweeps: spec.mcmc_steps,
                    stop_threshold: spec.stop_threshold,
                };
                saem_sbm(m, &spec.theta0, &config, &rng)?
            }
            _ => return Err(wrong_model(spec, "sbm")),
        },
        AlgorithmKind::Pgd | AlgorithmKind::Ipla => {
            let config = LangevinConfig {
                variant: if spec.kind == AlgorithmKind::Pgd {
                    LangevinVariant::Pgd
                } else {
                    LangevinVariant::Ipla
                },
                schedule: schedule(spec)?,
                num_particles: spec.particles,
                horizon: spec.horizon,
            };
            run_langevin(model, &config, &spec.theta0, &rng)?
        }
        AlgorithmKind::SmcMml => {
            let config = SmcMmlConfig {
                num_particles: spec.particles,
                rungs: spec.horizon,
                theta_lo: spec.theta_lo,
                theta_hi: spec.theta_hi,
                theta_moves: spec.mcmc_steps,
            };
            smc_mml(model, &config, &rng)?
        }
    };
    let runtime_seconds = start.elapsed().as_secs_f64();
    let mse = instance.truth.as_ref().map(|t| {
        let est = trace.final_theta();
        match &instance.model {
            BuiltModel::Sbm(m) => smc_mmle::diagnostics::sbm_theta_mse(est, t, m.num_blocks),
            _ => est.iter().zip(t).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / t.len() as f64,
        }
    });
    let ari = match (&instance.model, &instance.labels) {
        (BuiltModel::Sbm(m), Some(truth)) => {
            let estimate = match saem_labels(&trace) {
                Some(l) => Some(l.to_vec()),
                None => match &trace.final_cloud {
                    Some(c) => Some(posterior_mode_labels(c, m.num_blocks)?),
                    None => None,
                },
            };
            estimate.map(|e| adjusted_rand_index(&e, truth)).transpose()?
        }
        _ => None,
    };
    Ok(RunOutcome {
        trace,
        runtime_seconds,
        mse,
        ari,
    })
}
