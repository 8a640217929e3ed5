use crate::error::{Error, Result};
use crate::particles::ParticleCloud;

/// A Gaussian with diagonal covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSummary {
    pub mean: Vec<f64>,
    pub var: Vec<f64>,
}

impl GaussianSummary {
    pub fn new(mean: Vec<f64>, var: Vec<f64>) -> Result<Self> {
        if mean.len() != var.len() {
            return Err(Error::LengthMismatch {
                left: mean.len(),
                right: var.len(),
            });
        }
        if let Some(v) = var.iter().find(|v| !(**v > 0.0)) {
            return Err(Error::DegenerateCloud(format!("variance {v} is not positive")));
        }
        Ok(Self { mean, var })
    }

    pub fn log_density(&self, x: &[f64]) -> f64 {
        self.mean
            .iter()
            .zip(&self.var)
            .zip(x)
            .map(|((m, v), xi)| -0.5 * ((2.0 * std::f64::consts::PI * v).ln() + (xi - m).powi(2) / v))
            .sum()
    }

    /// `E log q` under `q` itself, i.e. minus the entropy.
    pub fn neg_entropy(&self) -> f64 {
        self.var
            .iter()
            .map(|v| -0.5 * ((2.0 * std::f64::consts::PI * v).ln() + 1.0))
            .sum()
    }
}

/// Weighted mean and weighted per-coordinate variance of a continuous cloud.
pub fn gaussian_fit(cloud: &ParticleCloud) -> Result<GaussianSummary> {
    cloud.require_normalized()?;
    let d = cloud.particles[0].len();
    let w = cloud.weights();
    let mut mean = vec![0.0; d];
    for (x, wi) in cloud.particles.iter().zip(&w) {
        for (m, v) in mean.iter_mut().zip(x.real()) {
            *m += wi * v;
        }
    }
    let mut var = vec![0.0; d];
    for (x, wi) in cloud.particles.iter().zip(&w) {
        for ((s, v), m) in var.iter_mut().zip(x.real()).zip(&mean) {
            *s += wi * (v - m).powi(2);
        }
    }
    if var.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::DegenerateCloud("cloud has no spread in some coordinate".into()));
    }
    Ok(GaussianSummary { mean, var })
}

/// `KL(a | b)` for diagonal Gaussians.
pub fn gaussian_kl(a: &GaussianSummary, b: &GaussianSummary) -> f64 {
    a.mean
        .iter()
        .zip(&a.var)
        .zip(b.mean.iter().zip(&b.var))
        .map(|((ma, va), (mb, vb))| 0.5 * ((vb / va).ln() + (va + (ma - mb).powi(2)) / vb - 1.0))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::latent::LatentPoint;
    use crate::rng::RngStream;
    use approx::assert_relative_eq;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn kl_cases() {
        let a = GaussianSummary::new(vec![0.3, -1.0], vec![0.5, 2.0]).unwrap();
        assert_eq!(gaussian_kl(&a, &a), 0.0);
        let p = GaussianSummary::new(vec![1.0], vec![1.0]).unwrap();
        let q = GaussianSummary::new(vec![0.0], vec![1.0]).unwrap();
        assert_relative_eq!(gaussian_kl(&p, &q), 0.5, epsilon = 1e-15);
        // variance-only mismatch: 0.5 (2 - 1 - ln 2)
        let r = GaussianSummary::new(vec![0.0], vec![2.0]).unwrap();
        assert_relative_eq!(gaussian_kl(&r, &q), 0.5 * (1.0 - 2f64.ln()), epsilon = 1e-15);
    }

    #[test]
    fn fit_recovers_a_standard_normal() {
        let mut r = RngStream::new(1).rng();
        let pts = (0..10_000).map(|_| LatentPoint::Real(vec![StandardNormal.sample(&mut r)])).collect();
        let g = gaussian_fit(&ParticleCloud::uniform(pts).unwrap()).unwrap();
        assert!(g.mean[0].abs() < 0.05);
        assert!((g.var[0] - 1.0).abs() < 0.05);
    }

    #[test]
    fn degenerate_cloud_is_rejected() {
        let c = ParticleCloud::uniform(vec![LatentPoint::Real(vec![1.0, 2.0]); 3]).unwrap();
        assert!(matches!(gaussian_fit(&c), Err(Error::DegenerateCloud(_))));
    }

    #[test]
    fn weighted_fit() {
        let pts = vec![LatentPoint::Real(vec![0.0]), LatentPoint::Real(vec![4.0])];
        let c = crate::particles::normalize_weights(ParticleCloud::weighted(pts, vec![0.75f64.ln(), 0.25f64.ln()]).unwrap()).unwrap();
        let g = gaussian_fit(&c).unwrap();
        assert_relative_eq!(g.mean[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(g.var[0], 0.75 * 1.0 + 0.25 * 9.0, epsilon = 1e-12);
    }
}
