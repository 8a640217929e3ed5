//! Per-iteration run records shared by every algorithm.

use crate::particles::ParticleCloud;

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iter: usize,
    pub theta: Vec<f64>,
    pub ess: f64,
    /// NaN when no MCMC move happened (iteration 0, closed-form baselines).
    pub accept: f64,
    /// Wall-clock time since the start of the run.
    pub elapsed_ns: u64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunTrace {
    pub records: Vec<IterationRecord>,
    pub final_cloud: Option<ParticleCloud>,
    /// Ordered key/value pairs describing how the run was produced.
    pub metadata: Vec<(String, String)>,
    /// Iterations at which a particle left the model's support or became
    /// non-finite (Langevin baselines only).
    pub divergences: Vec<usize>,
}

impl RunTrace {
    pub fn final_theta(&self) -> &[f64] {
        &self.records.last().expect("trace has at least the initial record").theta
    }

    pub fn thetas(&self) -> Vec<Vec<f64>> {
        self.records.iter().map(|r| r.theta.clone()).collect()
    }

    /// Number of completed iterations (rows minus the initial one).
    pub fn iterations(&self) -> usize {
        self.records.len().saturating_sub(1)
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    pub fn total_elapsed_ns(&self) -> u64 {
        self.records.last().map_or(0, |r| r.elapsed_ns)
    }

    pub fn diverged(&self) -> bool {
        !self.divergences.is_empty()
    }
}

/// True when `max_i (theta_n(i) - theta_{n-1}(i))^2 < threshold` for the
/// last two records. Needs at least two records.
pub fn stop_rule(records: &[IterationRecord], threshold: f64) -> bool {
    match records {
        [.., prev, last] => {
            let max_sq = last
                .theta
                .iter()
                .zip(&prev.theta)
                .map(|(a, b)| (a - b).powi(2))
                .fold(0.0, f64::max);
            max_sq < threshold
        }
        _ => false,
    }
}

/// Default threshold of the stop rule.
pub const DEFAULT_STOP_THRESHOLD: f64 = 1e-7;
