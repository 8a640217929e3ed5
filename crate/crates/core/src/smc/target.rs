//! Unnormalized log densities over the latent space.

use crate::latent::LatentPoint;
use crate::model::LatentModel;
use crate::particles::sanitize_log_density;

pub trait LogTarget: Sync {
    fn log_density(&self, x: &LatentPoint) -> f64;

    /// Change in log density when site `site` of a discrete point moves to
    /// `new_category`.
    fn site_delta(&self, x: &[usize], site: usize, new_category: usize) -> f64 {
        let mut moved = x.to_vec();
        moved[site] = new_category;
        self.log_density(&LatentPoint::Discrete(moved)) - self.log_density(&LatentPoint::Discrete(x.to_vec()))
    }
}

/// Wraps a closure as a target.
pub struct FnTarget<F>(pub F);

impl<F: Fn(&LatentPoint) -> f64 + Sync> LogTarget for FnTarget<F> {
    fn log_density(&self, x: &LatentPoint) -> f64 {
        (self.0)(x)
    }
}

/// `x -> mu0_coeff * log mu_0(x) + sum_j coeff_j * log p_{theta_j}(x, y)`.
///
/// Every target and incremental weight used by the mirror-descent samplers
/// has this form; zero coefficients are skipped so `0 * -inf` never appears.
#[derive(Debug, Clone)]
pub struct LogLinearTarget<'m, M: LatentModel + ?Sized> {
    pub model: &'m M,
    pub mu0_coeff: f64,
    pub joint_terms: Vec<(f64, Vec<f64>)>,
}

impl<'m, M: LatentModel + ?Sized> LogLinearTarget<'m, M> {
    pub fn new(model: &'m M, mu0_coeff: f64, joint_terms: Vec<(f64, Vec<f64>)>) -> Self {
        Self {
            model,
            mu0_coeff,
            joint_terms: joint_terms.into_iter().filter(|(c, _)| *c != 0.0).collect(),
        }
    }

    /// Number of `log p_theta` evaluations per density call.
    pub fn num_terms(&self) -> usize {
        self.joint_terms.len()
    }

    /// The joint-term exponents, followed by the `mu_0` exponent.
    pub fn exponent_sum(&self) -> f64 {
        self.mu0_coeff + self.joint_terms.iter().map(|(c, _)| c).sum::<f64>()
    }
}

impl<M: LatentModel + ?Sized> LogTarget for LogLinearTarget<'_, M> {
    fn log_density(&self, x: &LatentPoint) -> f64 {
        let mut total = 0.0;
        if self.mu0_coeff != 0.0 {
            total += self.mu0_coeff * self.model.log_prior0(x);
        }
        if !self.joint_terms.is_empty() {
            let thetas: Vec<&[f64]> = self.joint_terms.iter().map(|(_, t)| t.as_slice()).collect();
            let values = self.model.log_joint_many(&thetas, x);
            for ((c, _), v) in self.joint_terms.iter().zip(values) {
                total += c * v;
            }
        }
        sanitize_log_density(total)
    }

    fn site_delta(&self, x: &[usize], site: usize, new_category: usize) -> f64 {
        let mut total = 0.0;
        if self.mu0_coeff != 0.0 {
            total += self.mu0_coeff * self.model.log_prior0_site_delta(x, site, new_category);
        }
        for (c, theta) in &self.joint_terms {
            total += c * self.model.log_joint_site_delta(theta, x, site, new_category);
        }
        if total.is_nan() {
            f64::NEG_INFINITY
        } else {
            total
        }
    }
}
