//! Exact mirror-descent iterates for the toy Gaussian model and the free
//! energy `F(theta, mu) = KL(mu | p_theta(., y))`.
//!
//! With `mu_0 = N(0, I)` every iterate is Gaussian with a shared precision
//! `tau_n`. The update `mu_{n+1} ~ mu_n^{1-gamma} p_{theta_n}(., y)^gamma`
//! multiplies Gaussians, and `x -> p_theta(x, y)` is proportional to
//! `N((y + theta) / 2, I / 2)`, so
//!
//! ```text
//! tau_{n+1} = (1 - gamma) tau_n + 2 gamma
//! m_{n+1}   = [(1 - gamma) tau_n m_n + gamma (y + theta_n)] / tau_{n+1}
//! theta_{n+1} = theta_n - gamma (d theta_n - sum_i m_{n,i})
//! ```

use super::gaussian::{gaussian_fit, GaussianSummary};
use crate::error::Result;
use crate::model::LatentModel;
use crate::models::ToyGaussianModel;
use crate::particles::ParticleCloud;
use crate::schedule::StepSchedule;

/// `theta_0..theta_T` and `mu_0..mu_T` of the infinite-particle iteration.
pub fn toy_exact_recursion(
    theta0: f64,
    schedule: &StepSchedule,
    model: &ToyGaussianModel,
    horizon: usize,
) -> (Vec<f64>, Vec<GaussianSummary>) {
    let d = model.dim();
    let mut theta = theta0;
    let mut tau = 1.0;
    let mut m = vec![0.0; d];
    let mut thetas = vec![theta];
    let mut summaries = vec![GaussianSummary {
        mean: m.clone(),
        var: vec![1.0; d],
    }];
    for n in 1..=horizon {
        let g = schedule.gamma(n);
        let next_theta = theta - g * (d as f64 * theta - m.iter().sum::<f64>());
        let next_tau = (1.0 - g) * tau + 2.0 * g;
        m = m
            .iter()
            .zip(&model.y)
            .map(|(mi, yi)| ((1.0 - g) * tau * mi + g * (yi + theta)) / next_tau)
            .collect();
        tau = next_tau;
        theta = next_theta;
        thetas.push(theta);
        summaries.push(GaussianSummary {
            mean: m.clone(),
            var: vec![1.0 / tau; d],
        });
    }
    (thetas, summaries)
}

/// `sum_i W^i [U(theta, X^i) + log q(X^i)]` with `q` the Gaussian fit of the cloud.
pub fn free_energy_estimate<M: LatentModel + ?Sized>(theta: &[f64], cloud: &ParticleCloud, model: &M) -> Result<f64> {
    let q = gaussian_fit(cloud)?;
    cloud.expectation(|x| -model.log_joint(theta, x) + q.log_density(x.real()))
}

/// `F(theta, q)` in closed form for a diagonal Gaussian `q` on the toy model.
pub fn toy_exact_free_energy(theta: f64, q: &GaussianSummary, model: &ToyGaussianModel) -> f64 {
    let d = model.dim() as f64;
    let expected_u: f64 = d * crate::models::LN_2PI
        + 0.5
            * q.mean
                .iter()
                .zip(&q.var)
                .zip(&model.y)
                .map(|((m, v), y)| (m - theta).powi(2) + (y - m).powi(2) + 2.0 * v)
                .sum::<f64>();
    expected_u + q.neg_entropy()
}
