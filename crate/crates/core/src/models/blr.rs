//! Bayesian logistic regression with a Gaussian random effect:
//! `x ~ N(theta, I)`, `y_j | x ~ Bernoulli(s(v_j . x))`.

use rand::Rng;

use super::{standard_normal_logpdf, standard_normal_vec, LN_2PI};
use crate::latent::{LatentPoint, LatentSpace};
use crate::model::LatentModel;
use crate::rng::SmcRng;

#[derive(Debug, Clone, PartialEq)]
pub struct BlrModel {
    pub covariates: Vec<Vec<f64>>,
    pub responses: Vec<bool>,
    dim: usize,
}

/// `log s(u)` without overflow.
fn log_sigmoid(u: f64) -> f64 {
    if u >= 0.0 {
        -(-u).exp().ln_1p()
    } else {
        u - u.exp().ln_1p()
    }
}

fn sigmoid(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl BlrModel {
    pub fn new(covariates: Vec<Vec<f64>>, responses: Vec<bool>) -> Self {
        assert!(!covariates.is_empty() && covariates.len() == responses.len());
        let dim = covariates[0].len();
        assert!(covariates.iter().all(|v| v.len() == dim));
        Self {
            covariates,
            responses,
            dim,
        }
    }

    /// Covariates uniform on `[-1, 1]^d`, one latent draw `x ~ N(theta, I)`
    /// and responses `Bernoulli(s(v_j . x))`.
    pub fn simulate(theta: &[f64], num_points: usize, rng: &mut SmcRng) -> Self {
        let d = theta.len();
        let x: Vec<f64> = standard_normal_vec(d, rng).iter().zip(theta).map(|(z, t)| t + z).collect();
        let covariates: Vec<Vec<f64>> = (0..num_points)
            .map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let responses = covariates.iter().map(|v| rng.random::<f64>() < sigmoid(dot(v, &x))).collect();
        Self::new(covariates, responses)
    }

    /// `log p(y | x)`.
    pub fn log_likelihood(&self, x: &[f64]) -> f64 {
        self.covariates
            .iter()
            .zip(&self.responses)
            .map(|(v, &y)| {
                let u = dot(v, x);
                if y {
                    log_sigmoid(u)
                } else {
                    log_sigmoid(-u)
                }
            })
            .sum()
    }
}

impl LatentModel for BlrModel {
    fn latent_space(&self) -> LatentSpace {
        LatentSpace::Continuous { dim: self.dim }
    }

    fn theta_dim(&self) -> usize {
        self.dim
    }

    fn log_joint(&self, theta: &[f64], x: &LatentPoint) -> f64 {
        self.log_joint_many(&[theta], x)[0]
    }

    fn grad_theta_u(&self, theta: &[f64], x: &LatentPoint) -> Vec<f64> {
        theta.iter().zip(x.real()).map(|(t, xi)| t - xi).collect()
    }

    fn grad_x_u(&self, theta: &[f64], x: &LatentPoint) -> Option<Vec<f64>> {
        let x = x.real();
        let mut g: Vec<f64> = x.iter().zip(theta).map(|(xi, t)| xi - t).collect();
        for (v, &y) in self.covariates.iter().zip(&self.responses) {
            let r = (if y { 1.0 } else { 0.0 }) - sigmoid(dot(v, x));
            for (gk, vk) in g.iter_mut().zip(v) {
                *gk -= r * vk;
            }
        }
        Some(g)
    }

    /// The likelihood does not depend on `theta`, so it is computed once.
    fn log_joint_many(&self, thetas: &[&[f64]], x: &LatentPoint) -> Vec<f64> {
        let x = x.real();
        let lik = self.log_likelihood(x);
        let c = -0.5 * self.dim as f64 * LN_2PI;
        thetas
            .iter()
            .map(|t| c + lik - 0.5 * x.iter().zip(t.iter()).map(|(a, b)| (a - b).powi(2)).sum::<f64>())
            .collect()
    }

    fn log_prior0(&self, x: &LatentPoint) -> f64 {
        standard_normal_logpdf(x.real())
    }

    fn sample_prior0(&self, rng: &mut SmcRng) -> LatentPoint {
        LatentPoint::Real(standard_normal_vec(self.dim, rng))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::grad_theta_fd_error;
    use crate::rng::RngStream;
    use approx::assert_relative_eq;

    #[test]
    fn log_sigmoid_is_stable() {
        assert_relative_eq!(log_sigmoid(0.0), -(2f64.ln()), epsilon = 1e-15);
        assert!(log_sigmoid(800.0) == 0.0);
        assert_relative_eq!(log_sigmoid(-800.0), -800.0, epsilon = 1e-12);
        assert_relative_eq!(sigmoid(3.0) + sigmoid(-3.0), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn gradients_match_finite_differences() {
        let m = BlrModel::simulate(&[2.0, 3.0, 4.0], 200, &mut RngStream::new(1).rng());
        let mut r = RngStream::new(2).rng();
        for _ in 0..20 {
            let x = m.sample_prior0(&mut r);
            let t: Vec<f64> = (0..3).map(|_| r.random_range(-4.0..4.0)).collect();
            assert!(grad_theta_fd_error(&m, &t, &x, 1e-5) < 1e-6);
            let gx = m.grad_x_u(&t, &x).unwrap();
            for k in 0..3 {
                let mut hi = x.real().to_vec();
                let mut lo = x.real().to_vec();
                hi[k] += 1e-6;
                lo[k] -= 1e-6;
                let fd = -(m.log_joint(&t, &LatentPoint::Real(hi)) - m.log_joint(&t, &LatentPoint::Real(lo))) / 2e-6;
                assert!((fd - gx[k]).abs() < 1e-5 * gx[k].abs().max(1.0), "{fd} vs {}", gx[k]);
            }
        }
    }

    #[test]
    fn simulated_data_shape() {
        let m = BlrModel::simulate(&[2.0, 3.0, 4.0], 900, &mut RngStream::new(3).rng());
        assert_eq!(m.covariates.len(), 900);
        assert!(m.covariates.iter().flatten().all(|v| (-1.0..1.0).contains(v)));
        // responses follow the sign of v . theta where that is large
        let strong: Vec<bool> = m
            .covariates
            .iter()
            .zip(&m.responses)
            .filter(|(v, _)| dot(v, &[2.0, 3.0, 4.0]).abs() > 4.0)
            .map(|(v, &y)| y == (dot(v, &[2.0, 3.0, 4.0]) > 0.0))
            .collect();
        let agree = strong.iter().filter(|&&a| a).count() as f64 / strong.len() as f64;
        assert!(agree > 0.8, "agreement {agree}");
    }
}
