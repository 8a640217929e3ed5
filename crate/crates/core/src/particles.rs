//! Weighted particle clouds and log-domain weight handling.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::latent::LatentPoint;

static NAN_DENSITIES: AtomicU64 = AtomicU64::new(0);

/// Maps NaN log densities to `-inf` and counts the occurrence.
pub fn sanitize_log_density(v: f64) -> f64 {
    if v.is_nan() {
        NAN_DENSITIES.fetch_add(1, Ordering::Relaxed);
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Number of NaN log densities replaced by `-inf` since process start.
pub fn nan_density_count() -> u64 {
    NAN_DENSITIES.load(Ordering::Relaxed)
}

/// Stable `log(sum(exp(v)))`; `-inf` when every entry is `-inf`.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParticleCloud {
    pub particles: Vec<LatentPoint>,
    pub log_weights: Vec<f64>,
    pub normalized: bool,
}

impl ParticleCloud {
    /// An equally weighted, normalized cloud.
    pub fn uniform(particles: Vec<LatentPoint>) -> Result<Self> {
        if particles.is_empty() {
            return Err(Error::DegenerateCloud("a cloud needs at least one particle".into()));
        }
        let lw = -(particles.len() as f64).ln();
        let n = particles.len();
        Ok(Self {
            particles,
            log_weights: vec![lw; n],
            normalized: true,
        })
    }

    /// An unnormalized cloud with the given log-weights.
    pub fn weighted(particles: Vec<LatentPoint>, log_weights: Vec<f64>) -> Result<Self> {
        if particles.is_empty() {
            return Err(Error::DegenerateCloud("a cloud needs at least one particle".into()));
        }
        if particles.len() != log_weights.len() {
            return Err(Error::LengthMismatch {
                left: particles.len(),
                right: log_weights.len(),
            });
        }
        Ok(Self {
            particles,
            log_weights,
            normalized: false,
        })
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    /// Linear-scale weights. Only meaningful on a normalized cloud.
    pub fn weights(&self) -> Vec<f64> {
        self.log_weights.iter().map(|w| w.exp()).collect()
    }

    pub fn require_normalized(&self) -> Result<()> {
        if self.normalized {
            Ok(())
        } else {
            Err(Error::NotNormalized)
        }
    }

    /// Weighted mean of `f` over the particles.
    pub fn expectation<F: Fn(&LatentPoint) -> f64>(&self, f: F) -> Result<f64> {
        self.require_normalized()?;
        Ok(self
            .particles
            .iter()
            .zip(&self.log_weights)
            .map(|(x, lw)| lw.exp() * f(x))
            .sum())
    }
}

/// Normalizes log-weights with a max shift so that `exp` of them sums to one.
pub fn normalize_weights(cloud: ParticleCloud) -> Result<ParticleCloud> {
    let ParticleCloud {
        particles,
        log_weights,
        ..
    } = cloud;
    let cleaned: Vec<f64> = log_weights
        .into_iter()
        .map(|w| if w.is_nan() { f64::NEG_INFINITY } else { w })
        .collect();
    let max = cleaned.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Err(Error::AllWeightsDegenerate);
    }
    let shifted: Vec<f64> = if max == f64::INFINITY {
        // +inf entries share all the mass.
        cleaned
            .iter()
            .map(|&w| if w == f64::INFINITY { 0.0 } else { f64::NEG_INFINITY })
            .collect()
    } else {
        cleaned.iter().map(|w| w - max).collect()
    };
    let log_norm = log_sum_exp(&shifted);
    let log_weights = shifted.into_iter().map(|w| w - log_norm).collect();
    Ok(ParticleCloud {
        particles,
        log_weights,
        normalized: true,
    })
}

/// `1 / sum(W^2)` for a normalized cloud.
pub fn effective_sample_size(cloud: &ParticleCloud) -> Result<f64> {
    cloud.require_normalized()?;
    let sum_sq: f64 = cloud.log_weights.iter().map(|w| (2.0 * w).exp()).sum();
    Ok(1.0 / sum_sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn points(n: usize) -> Vec<LatentPoint> {
        (0..n).map(|i| LatentPoint::Real(vec![i as f64])).collect()
    }

    #[test]
    fn equal_log_weights_normalize_to_thirds() {
        let c = normalize_weights(ParticleCloud::weighted(points(3), vec![0.0; 3]).unwrap()).unwrap();
        for w in c.weights() {
            assert_relative_eq!(w, 1.0 / 3.0, max_relative = 1e-12);
        }
        assert!(c.normalized);
    }

    #[test]
    fn minus_infinity_gets_zero_mass() {
        let c = normalize_weights(
            ParticleCloud::weighted(points(2), vec![0.0, f64::NEG_INFINITY]).unwrap(),
        )
        .unwrap();
        assert_eq!(c.weights(), vec![1.0, 0.0]);
    }

    #[test]
    fn one_to_three_ratio() {
        let c = normalize_weights(
            ParticleCloud::weighted(points(2), vec![1f64.ln(), 3f64.ln()]).unwrap(),
        )
        .unwrap();
        let w = c.weights();
        assert_relative_eq!(w[0], 0.25, max_relative = 1e-12);
        assert_relative_eq!(w[1], 0.75, max_relative = 1e-12);
    }

    #[test]
    fn all_degenerate_is_an_error() {
        let c = ParticleCloud::weighted(points(2), vec![f64::NEG_INFINITY, f64::NAN]).unwrap();
        assert_eq!(normalize_weights(c), Err(Error::AllWeightsDegenerate));
    }

    #[test]
    fn huge_log_weights_do_not_overflow() {
        let c = normalize_weights(ParticleCloud::weighted(points(2), vec![1000.0, 1000.0 + 3f64.ln()]).unwrap()).unwrap();
        assert_relative_eq!(c.weights()[1], 0.75, max_relative = 1e-12);
    }

    #[test]
    fn ess_cases() {
        let c = ParticleCloud::uniform(points(100)).unwrap();
        assert_relative_eq!(effective_sample_size(&c).unwrap(), 100.0, max_relative = 1e-12);

        let mut lw = vec![f64::NEG_INFINITY; 5];
        lw[2] = 0.0;
        let c = normalize_weights(ParticleCloud::weighted(points(5), lw).unwrap()).unwrap();
        assert_relative_eq!(effective_sample_size(&c).unwrap(), 1.0);

        let c = normalize_weights(
            ParticleCloud::weighted(points(2), vec![0.25f64.ln(), 0.75f64.ln()]).unwrap(),
        )
        .unwrap();
        assert_relative_eq!(effective_sample_size(&c).unwrap(), 1.6, max_relative = 1e-12);
    }

    #[test]
    fn ess_requires_normalization() {
        let c = ParticleCloud::weighted(points(2), vec![0.0, 0.0]).unwrap();
        assert_eq!(effective_sample_size(&c), Err(Error::NotNormalized));
    }

    #[test]
    fn nan_sanitizer_counts() {
        let before = nan_density_count();
        assert_eq!(sanitize_log_density(f64::NAN), f64::NEG_INFINITY);
        assert!(nan_density_count() > before);
        assert_eq!(sanitize_log_density(-2.0), -2.0);
    }

    proptest! {
        #[test]
        fn normalization_properties(lw in prop::collection::vec(-50.0f64..50.0, 1..40), shift in -1e3f64..1e3) {
            let n = lw.len();
            let once = normalize_weights(ParticleCloud::weighted(points(n), lw.clone()).unwrap()).unwrap();
            let sum: f64 = once.weights().iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-12);
            prop_assert!(once.log_weights.iter().all(|w| w.is_finite()));

            let twice = normalize_weights(once.clone()).unwrap();
            for (a, b) in once.log_weights.iter().zip(&twice.log_weights) {
                prop_assert!((a - b).abs() < 1e-12);
            }

            let shifted: Vec<f64> = lw.iter().map(|w| w + shift).collect();
            let s = normalize_weights(ParticleCloud::weighted(points(n), shifted).unwrap()).unwrap();
            for (a, b) in once.weights().iter().zip(s.weights()) {
                prop_assert!((a - b).abs() < 1e-10);
            }

            // order preserved
            for i in 0..n {
                for j in 0..n {
                    if lw[i] < lw[j] {
                        prop_assert!(once.log_weights[i] <= once.log_weights[j]);
                    }
                }
            }

            let ess = effective_sample_size(&once).unwrap();
            prop_assert!(ess >= 1.0 - 1e-9 && ess <= n as f64 + 1e-9);
            let all_equal = lw.iter().all(|w| *w == lw[0]);
            prop_assert_eq!(all_equal, (ess - n as f64).abs() < 1e-9 * n as f64);
        }
    }
}
