//! The contract every latent variable model implements.
//!
//! Observed data live inside the model value; samplers only ever see
//! `log p_theta(x, y)` and its gradients. All methods are pure.

use crate::error::Result;
use crate::latent::{LatentPoint, LatentSpace};
use crate::rng::SmcRng;

pub trait LatentModel: Sync {
    fn latent_space(&self) -> LatentSpace;

    fn theta_dim(&self) -> usize;

    /// `log p_theta(x, y) = -U(theta, x)`.
    fn log_joint(&self, theta: &[f64], x: &LatentPoint) -> f64;

    /// `grad_theta U(theta, x)`.
    fn grad_theta_u(&self, theta: &[f64], x: &LatentPoint) -> Vec<f64>;

    /// `grad_x U(theta, x)`; only continuous models that support Langevin
    /// baselines provide it.
    fn grad_x_u(&self, _theta: &[f64], _x: &LatentPoint) -> Option<Vec<f64>> {
        None
    }

    /// Log density of the initial distribution `mu_0`.
    fn log_prior0(&self, x: &LatentPoint) -> f64;

    fn sample_prior0(&self, rng: &mut SmcRng) -> LatentPoint;

    /// `log p_theta(x, y)` at several parameter values for one `x`. Models
    /// with cheap sufficient statistics override this.
    fn log_joint_many(&self, thetas: &[&[f64]], x: &LatentPoint) -> Vec<f64> {
        thetas.iter().map(|t| self.log_joint(t, x)).collect()
    }

    /// Change in `log p_theta(x, y)` when site `site` of a discrete point
    /// moves to `new_category`.
    fn log_joint_site_delta(&self, theta: &[f64], x: &[usize], site: usize, new_category: usize) -> f64 {
        let mut moved = x.to_vec();
        moved[site] = new_category;
        self.log_joint(theta, &LatentPoint::Discrete(moved)) - self.log_joint(theta, &LatentPoint::Discrete(x.to_vec()))
    }

    fn log_prior0_site_delta(&self, x: &[usize], site: usize, new_category: usize) -> f64 {
        let mut moved = x.to_vec();
        moved[site] = new_category;
        self.log_prior0(&LatentPoint::Discrete(moved)) - self.log_prior0(&LatentPoint::Discrete(x.to_vec()))
    }

    /// The model's own category law at a discrete site, used by the
    /// prior-proposal kernel.
    fn category_law(&self, _site: usize) -> Option<Vec<f64>> {
        None
    }

    /// Factor applied to the expected theta-gradient in the mirror step.
    /// Models whose `U` sums many exchangeable observation terms return the
    /// reciprocal of that count, so that the step size acts per observation
    /// while the latent targets keep the full joint.
    fn theta_gradient_scale(&self) -> f64 {
        1.0
    }

    /// Projection applied after every mirror step (identity by default).
    fn project_theta(&self, theta: Vec<f64>) -> Result<Vec<f64>> {
        Ok(theta)
    }
}

/// Weighted gradient `sum_i W^i grad_theta U(theta, X^i)` over a normalized cloud.
pub fn expected_grad_theta<M: LatentModel + ?Sized>(
    model: &M,
    theta: &[f64],
    cloud: &crate::particles::ParticleCloud,
) -> Result<Vec<f64>> {
    use rayon::prelude::*;
    cloud.require_normalized()?;
    let d = model.theta_dim();
    let grads: Vec<Vec<f64>> = cloud
        .particles
        .par_iter()
        .zip(cloud.log_weights.par_iter())
        .map(|(x, lw)| {
            let w = lw.exp();
            if w == 0.0 {
                return vec![0.0; d];
            }
            model.grad_theta_u(theta, x).into_iter().map(|g| w * g).collect()
        })
        .collect();
    // sequential reduction keeps the sum order fixed
    let mut out = vec![0.0; d];
    for g in grads {
        for (o, v) in out.iter_mut().zip(g) {
            *o += v;
        }
    }
    Ok(out)
}

/// Central finite-difference check of `grad_theta_u` against `-log_joint`.
/// Returns the worst relative error over the components.
pub fn grad_theta_fd_error<M: LatentModel + ?Sized>(model: &M, theta: &[f64], x: &LatentPoint, step: f64) -> f64 {
    let analytic = model.grad_theta_u(theta, x);
    let mut worst: f64 = 0.0;
    for k in 0..theta.len() {
        let mut hi = theta.to_vec();
        let mut lo = theta.to_vec();
        let h = step * theta[k].abs().max(1.0);
        hi[k] += h;
        lo[k] -= h;
        let fd = -(model.log_joint(&hi, x) - model.log_joint(&lo, x)) / (2.0 * h);
        let err = (fd - analytic[k]).abs() / analytic[k].abs().max(1.0);
        worst = worst.max(err);
    }
    worst
}
