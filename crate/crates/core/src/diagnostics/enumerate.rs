//! Exact normalization of a target over a small discrete space.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::latent::{LatentPoint, LatentSpace};
use crate::particles::{log_sum_exp, ParticleCloud};
use crate::smc::LogTarget;

pub const DEFAULT_STATE_CAP: u128 = 1 << 20;

/// Probability of every state. State `k` has label `(k / q^i) mod q` at site `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnumeratedDistribution {
    pub dim: usize,
    pub num_categories: usize,
    pub probs: Vec<f64>,
    pub log_normalizer: f64,
}

impl EnumeratedDistribution {
    pub fn state(&self, index: usize) -> Vec<usize> {
        decode(index, self.dim, self.num_categories)
    }

    pub fn index_of(&self, labels: &[usize]) -> usize {
        labels.iter().rev().fold(0, |acc, &c| acc * self.num_categories + c)
    }

    pub fn expectation<F: Fn(&[usize]) -> f64>(&self, f: F) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 0.0)
            .map(|(k, p)| p * f(&self.state(k)))
            .sum()
    }

    /// Total variation distance to the weighted empirical law of `cloud`.
    pub fn total_variation(&self, cloud: &ParticleCloud) -> Result<f64> {
        cloud.require_normalized()?;
        let mut empirical = vec![0.0; self.probs.len()];
        for (x, w) in cloud.particles.iter().zip(cloud.weights()) {
            empirical[self.index_of(x.labels())] += w;
        }
        Ok(0.5 * self.probs.iter().zip(&empirical).map(|(p, q)| (p - q).abs()).sum::<f64>())
    }
}

fn decode(mut index: usize, dim: usize, q: usize) -> Vec<usize> {
    (0..dim)
        .map(|_| {
            let c = index % q;
            index /= q;
            c
        })
        .collect()
}

pub fn enumerate_target<T: LogTarget + ?Sized>(target: &T, space: &LatentSpace) -> Result<EnumeratedDistribution> {
    enumerate_target_with_cap(target, space, DEFAULT_STATE_CAP)
}

pub fn enumerate_target_with_cap<T: LogTarget + ?Sized>(
    target: &T,
    space: &LatentSpace,
    cap: u128,
) -> Result<EnumeratedDistribution> {
    let (dim, q) = match *space {
        LatentSpace::Discrete { dim, num_categories } => (dim, num_categories),
        LatentSpace::Continuous { .. } => {
            return Err(Error::LatentMismatch("cannot enumerate a continuous space".into()));
        }
    };
    let states = (q as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
    if states > cap {
        return Err(Error::SpaceTooLarge { states, cap });
    }
    let n = states as usize;
    let log_p: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|k| target.log_density(&LatentPoint::Discrete(decode(k, dim, q))))
        .collect();
    let log_normalizer = log_sum_exp(&log_p);
    if !log_normalizer.is_finite() {
        return Err(Error::AllWeightsDegenerate);
    }
    let probs = log_p.iter().map(|l| (l - log_normalizer).exp()).collect();
    Ok(EnumeratedDistribution {
        dim,
        num_categories: q,
        probs,
        log_normalizer,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smc::FnTarget;

    #[test]
    fn uniform_over_eight_states() {
        let d = enumerate_target(&FnTarget(|_: &LatentPoint| 0.0), &LatentSpace::Discrete { dim: 3, num_categories: 2 }).unwrap();
        assert_eq!(d.probs.len(), 8);
        assert!(d.probs.iter().all(|p| (p - 0.125).abs() < 1e-15));
        assert!((d.probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constraint_keeps_two_states() {
        let t = FnTarget(|x: &LatentPoint| if x.labels()[0] == 0 { 0.0 } else { f64::NEG_INFINITY });
        let d = enumerate_target(&t, &LatentSpace::Discrete { dim: 2, num_categories: 2 }).unwrap();
        for k in 0..4 {
            let expect = if d.state(k)[0] == 0 { 0.5 } else { 0.0 };
            assert_eq!(d.probs[k], expect);
        }
        assert_eq!(d.expectation(|x| x[1] as f64), 0.5);
    }

    #[test]
    fn state_indexing_roundtrips() {
        let d = EnumeratedDistribution {
            dim: 4,
            num_categories: 3,
            probs: vec![0.0; 81],
            log_normalizer: 0.0,
        };
        for k in 0..81 {
            assert_eq!(d.index_of(&d.state(k)), k);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let t = FnTarget(|_: &LatentPoint| 0.0);
        let r = enumerate_target(&t, &LatentSpace::Discrete { dim: 21, num_categories: 2 });
        assert_eq!(r, Err(Error::SpaceTooLarge { states: 1 << 21, cap: 1 << 20 }));
        assert!(matches!(
            enumerate_target_with_cap(&t, &LatentSpace::Discrete { dim: 3, num_categories: 2 }, 4),
            Err(Error::SpaceTooLarge { .. })
        ));
    }
}
