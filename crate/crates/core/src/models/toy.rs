//! `x | theta ~ N(theta 1, I)`, `y | x ~ N(x, I)` with scalar `theta`.
//!
//! Everything is available in closed form: the MLE is `mean(y)` and the
//! posterior at `theta` is `N((y + theta) / 2, I / 2)`.

use super::{standard_normal_logpdf, standard_normal_vec, LN_2PI};
use crate::latent::{LatentPoint, LatentSpace};
use crate::model::LatentModel;
use crate::rng::SmcRng;

#[derive(Debug, Clone, PartialEq)]
pub struct ToyGaussianModel {
    pub y: Vec<f64>,
}

impl ToyGaussianModel {
    pub fn new(y: Vec<f64>) -> Self {
        assert!(!y.is_empty(), "toy model needs at least one observation");
        Self { y }
    }

    /// One observation of dimension `dim` drawn at parameter `theta`.
    pub fn simulate(theta: f64, dim: usize, rng: &mut SmcRng) -> Self {
        let x: Vec<f64> = standard_normal_vec(dim, rng).into_iter().map(|z| theta + z).collect();
        let y = standard_normal_vec(dim, rng).into_iter().zip(&x).map(|(z, xi)| xi + z).collect();
        Self::new(y)
    }

    pub fn dim(&self) -> usize {
        self.y.len()
    }

    /// `log p_theta(y) = log N(y; theta 1, 2 I)`.
    pub fn log_marginal(&self, theta: f64) -> f64 {
        let d = self.dim() as f64;
        -0.5 * d * (LN_2PI + 2f64.ln()) - self.y.iter().map(|yi| (yi - theta).powi(2)).sum::<f64>() / 4.0
    }
}

pub fn toy_exact_mle(y: &[f64]) -> f64 {
    y.iter().sum::<f64>() / y.len() as f64
}

/// Posterior mean vector and the per-coordinate variance.
pub fn toy_exact_posterior(theta: f64, y: &[f64]) -> (Vec<f64>, f64) {
    (y.iter().map(|yi| (yi + theta) / 2.0).collect(), 0.5)
}

impl LatentModel for ToyGaussianModel {
    fn latent_space(&self) -> LatentSpace {
        LatentSpace::Continuous { dim: self.dim() }
    }

    fn theta_dim(&self) -> usize {
        1
    }

    fn log_joint(&self, theta: &[f64], x: &LatentPoint) -> f64 {
        let t = theta[0];
        let x = x.real();
        let quad: f64 = x.iter().zip(&self.y).map(|(xi, yi)| (xi - t).powi(2) + (yi - xi).powi(2)).sum();
        -(self.dim() as f64) * LN_2PI - 0.5 * quad
    }

    fn grad_theta_u(&self, theta: &[f64], x: &LatentPoint) -> Vec<f64> {
        let x = x.real();
        vec![self.dim() as f64 * theta[0] - x.iter().sum::<f64>()]
    }

    fn grad_x_u(&self, theta: &[f64], x: &LatentPoint) -> Option<Vec<f64>> {
        let t = theta[0];
        Some(x.real().iter().zip(&self.y).map(|(xi, yi)| 2.0 * xi - t - yi).collect())
    }

    fn log_joint_many(&self, thetas: &[&[f64]], x: &LatentPoint) -> Vec<f64> {
        let x = x.real();
        let d = self.dim() as f64;
        let sx: f64 = x.iter().sum();
        let sxx: f64 = x.iter().map(|v| v * v).sum();
        let lik: f64 = x.iter().zip(&self.y).map(|(xi, yi)| (yi - xi).powi(2)).sum();
        thetas
            .iter()
            .map(|t| {
                let t = t[0];
                -d * LN_2PI - 0.5 * (sxx - 2.0 * t * sx + d * t * t + lik)
            })
            .collect()
    }

    fn log_prior0(&self, x: &LatentPoint) -> f64 {
        standard_normal_logpdf(x.real())
    }

    fn sample_prior0(&self, rng: &mut SmcRng) -> LatentPoint {
        LatentPoint::Real(standard_normal_vec(self.dim(), rng))
    }
}
