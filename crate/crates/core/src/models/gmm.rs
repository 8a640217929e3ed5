//! Symmetric two-component mixture `alpha N(theta, 1) + (1 - alpha) N(-theta, 1)`.
//!
//! One latent category per observation: category 0 is the `+theta`
//! component (probability `alpha`), category 1 the `-theta` one.

use rand::Rng;

use super::LN_2PI;
use crate::latent::{LatentPoint, LatentSpace};
use crate::model::LatentModel;
use crate::particles::log_sum_exp;
use crate::rng::SmcRng;

#[derive(Debug, Clone, PartialEq)]
pub struct GmmModel {
    pub data: Vec<f64>,
    pub alpha: f64,
    sum_sq: f64,
}

/// Sign of the component mean for a category.
fn sign(c: usize) -> f64 {
    if c == 0 {
        1.0
    } else {
        -1.0
    }
}

impl GmmModel {
    pub fn new(data: Vec<f64>, alpha: f64) -> Self {
        assert!(!data.is_empty(), "mixture model needs data");
        assert!(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
        let sum_sq = data.iter().map(|y| y * y).sum();
        Self { data, alpha, sum_sq }
    }

    /// `n` draws from the mixture at `theta`.
    pub fn simulate(theta: f64, alpha: f64, n: usize, rng: &mut SmcRng) -> Vec<f64> {
        (0..n)
            .map(|_| {
                let s = if rng.random::<f64>() < alpha { 1.0 } else { -1.0 };
                s * theta + rng.sample::<f64, _>(rand_distr::StandardNormal)
            })
            .collect()
    }

    fn log_alpha(&self, c: usize) -> f64 {
        if c == 0 {
            self.alpha.ln()
        } else {
            (1.0 - self.alpha).ln()
        }
    }
}

/// `sum_i log[alpha N(y_i; theta, 1) + (1 - alpha) N(y_i; -theta, 1)]`.
pub fn gmm_marginal_loglik(theta: f64, data: &[f64], alpha: f64) -> f64 {
    let (la, lb) = (alpha.ln(), (1.0 - alpha).ln());
    data.iter()
        .map(|y| {
            let a = la - 0.5 * (y - theta).powi(2);
            let b = lb - 0.5 * (y + theta).powi(2);
            log_sum_exp(&[a, b]) - 0.5 * LN_2PI
        })
        .sum()
}

impl LatentModel for GmmModel {
    fn latent_space(&self) -> LatentSpace {
        LatentSpace::Discrete {
            dim: self.data.len(),
            num_categories: 2,
        }
    }

    fn theta_dim(&self) -> usize {
        1
    }

    fn log_joint(&self, theta: &[f64], x: &LatentPoint) -> f64 {
        self.log_joint_many(&[theta], x)[0]
    }

    fn grad_theta_u(&self, theta: &[f64], x: &LatentPoint) -> Vec<f64> {
        let n = self.data.len() as f64;
        let sy: f64 = x.labels().iter().zip(&self.data).map(|(&c, y)| sign(c) * y).sum();
        vec![n * theta[0] - sy]
    }

    /// Uses `sum (y - s theta)^2 = sum y^2 - 2 theta sum s y + n theta^2`.
    fn log_joint_many(&self, thetas: &[&[f64]], x: &LatentPoint) -> Vec<f64> {
        let labels = x.labels();
        let n = labels.len() as f64;
        let n1 = labels.iter().filter(|&&c| c == 1).count() as f64;
        let sy: f64 = labels.iter().zip(&self.data).map(|(&c, y)| sign(c) * y).sum();
        let mut log_prior = 0.0;
        if n - n1 > 0.0 {
            log_prior += (n - n1) * self.log_alpha(0);
        }
        if n1 > 0.0 {
            log_prior += n1 * self.log_alpha(1);
        }
        thetas
            .iter()
            .map(|t| {
                let t = t[0];
                log_prior - 0.5 * (self.sum_sq - 2.0 * t * sy + n * t * t) - 0.5 * n * LN_2PI
            })
            .collect()
    }

    fn log_joint_site_delta(&self, theta: &[f64], x: &[usize], site: usize, new_category: usize) -> f64 {
        let (old, t, y) = (x[site], theta[0], self.data[site]);
        if old == new_category {
            return 0.0;
        }
        // (y - s' t)^2 - (y - s t)^2 = 2 y t (s - s') when s, s' are signs
        self.log_alpha(new_category) - self.log_alpha(old) - y * t * (sign(old) - sign(new_category))
    }

    fn log_prior0(&self, x: &LatentPoint) -> f64 {
        -(x.len() as f64) * 2f64.ln()
    }

    fn log_prior0_site_delta(&self, _x: &[usize], _site: usize, _new_category: usize) -> f64 {
        0.0
    }

    fn sample_prior0(&self, rng: &mut SmcRng) -> LatentPoint {
        LatentPoint::Discrete((0..self.data.len()).map(|_| rng.random_range(0..2)).collect())
    }

    fn theta_gradient_scale(&self) -> f64 {
        1.0 / self.data.len() as f64
    }

    fn category_law(&self, _site: usize) -> Option<Vec<f64>> {
        Some(vec![self.alpha, 1.0 - self.alpha])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::grad_theta_fd_error;
    use crate::rng::RngStream;
    use approx::assert_relative_eq;

    fn phi(z: f64) -> f64 {
        (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
    }

    #[test]
    fn coinciding_components() {
        let data = [0.3, -1.2, 2.0];
        let direct: f64 = data.iter().map(|y| phi(*y).ln()).sum();
        assert_relative_eq!(gmm_marginal_loglik(0.0, &data, 0.5), direct, epsilon = 1e-12);
    }

    #[test]
    fn symmetric_at_one_half() {
        let data = [0.3, -1.2, 2.0, 0.9];
        for t in [0.1, 0.7, 2.5] {
            assert_relative_eq!(
                gmm_marginal_loglik(t, &data, 0.5),
                gmm_marginal_loglik(-t, &data, 0.5),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn single_datum_regression() {
        let v = gmm_marginal_loglik(1.0, &[1.0], 0.9);
        assert_relative_eq!(v, (0.9 * phi(0.0) + 0.1 * phi(2.0)).ln(), epsilon = 1e-14);
        assert_relative_eq!(v, -1.0093737338965219, epsilon = 1e-13);
    }

    #[test]
    fn alpha_one_is_a_single_gaussian() {
        let data = [0.5, 1.5, 2.2];
        let mean = data.iter().sum::<f64>() / 3.0;
        let at = |t: f64| gmm_marginal_loglik(t, &data, 1.0);
        assert!(at(mean) > at(mean + 1e-3) && at(mean) > at(mean - 1e-3));
    }

    #[test]
    fn joint_marginalizes_to_the_mixture() {
        // sum over all 2^3 allocations of p(x) p(y|x) equals p(y)
        let data = vec![0.4, -1.1, 2.3];
        let m = GmmModel::new(data.clone(), 0.7);
        let t = [0.8];
        let joints: Vec<f64> = (0..8usize)
            .map(|s| m.log_joint(&t, &LatentPoint::Discrete((0..3).map(|i| (s >> i) & 1).collect())))
            .collect();
        assert_relative_eq!(log_sum_exp(&joints), gmm_marginal_loglik(0.8, &data, 0.7), epsilon = 1e-12);
    }

    #[test]
    fn site_delta_matches_full_difference() {
        let m = GmmModel::new(GmmModel::simulate(1.0, 0.6, 12, &mut RngStream::new(1).rng()), 0.6);
        let mut r = RngStream::new(2).rng();
        for _ in 0..50 {
            let x = m.sample_prior0(&mut r);
            let labels = x.labels().to_vec();
            let site = r.random_range(0..12);
            let t = [r.random_range(-2.0..2.0)];
            let mut moved = labels.clone();
            moved[site] = 1 - labels[site];
            let full = m.log_joint(&t, &LatentPoint::Discrete(moved)) - m.log_joint(&t, &x);
            assert_relative_eq!(m.log_joint_site_delta(&t, &labels, site, 1 - labels[site]), full, epsilon = 1e-9);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let m = GmmModel::new(GmmModel::simulate(1.0, 0.6, 30, &mut RngStream::new(3).rng()), 0.6);
        let mut r = RngStream::new(4).rng();
        for _ in 0..20 {
            let x = m.sample_prior0(&mut r);
            let t = [r.random_range(-3.0..3.0)];
            assert!(grad_theta_fd_error(&m, &t, &x, 1e-5) < 1e-6);
        }
    }

    #[test]
    fn theta_step_is_per_observation() {
        use crate::{run_mmle, CategoryProposal, KernelConfig, MirrorMap, MmleConfig, StepSchedule, Variant};
        let m = GmmModel::new(GmmModel::simulate(1.0, 0.9, 400, &mut RngStream::new(5).rng()), 0.9);
        assert_eq!(m.theta_gradient_scale(), 1.0 / 400.0);
        let config = MmleConfig {
            schedule: StepSchedule::constant(0.05, 150).unwrap(),
            mirror_map: MirrorMap::SquaredNorm,
            kernel: KernelConfig::discrete(CategoryProposal::Uniform),
            num_particles: 50,
            horizon: 150,
            variant: Variant::SmcsLvm,
            stop_threshold: None,
        };
        let trace = run_mmle(&m, &config, &[-2.0], &RngStream::new(6)).unwrap();
        let theta = trace.final_theta()[0];
        assert!((theta - 1.0).abs() < 0.2, "theta = {theta}");
    }
}
