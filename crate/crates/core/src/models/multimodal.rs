//! Student-t location model written as a Gamma scale mixture:
//! `x_j ~ Gamma(a, b)` (rate `b`) and `y_j | x_j ~ N(theta, 1 / x_j)`, one
//! precision per observation. The marginal likelihood is multimodal in
//! `theta` for the default data `{-20, 1, 2, 3}`.
//!
//! `mu_0` is `Gamma(1, 1)` in every coordinate.

use rand_distr::{Distribution, Gamma};
use statrs::function::gamma::ln_gamma;

use super::LN_2PI;
use crate::latent::{LatentPoint, LatentSpace};
use crate::model::LatentModel;
use crate::rng::SmcRng;

pub const DEFAULT_DATA: [f64; 4] = [-20.0, 1.0, 2.0, 3.0];
pub const DEFAULT_SHAPE: f64 = 0.525;
pub const DEFAULT_RATE: f64 = 0.025;

#[derive(Debug, Clone, PartialEq)]
pub struct MultimodalModel {
    pub data: Vec<f64>,
    pub shape: f64,
    pub rate: f64,
    log_norm: f64,
}

impl Default for MultimodalModel {
    fn default() -> Self {
        Self::new(DEFAULT_DATA.to_vec(), DEFAULT_SHAPE, DEFAULT_RATE)
    }
}

impl MultimodalModel {
    pub fn new(data: Vec<f64>, shape: f64, rate: f64) -> Self {
        assert!(!data.is_empty() && shape > 0.0 && rate > 0.0);
        let log_norm = shape * rate.ln() - ln_gamma(shape) - 0.5 * LN_2PI;
        Self {
            data,
            shape,
            rate,
            log_norm,
        }
    }

    /// Shape and rate of the Gamma law of `x_j` given `y_j` at `theta`.
    pub fn conditional_posterior(&self, theta: f64, j: usize) -> (f64, f64) {
        (self.shape + 0.5, self.rate + 0.5 * (self.data[j] - theta).powi(2))
    }

    /// Exact `log p_theta(y)`: each observation is a scaled Student t.
    pub fn log_marginal(&self, theta: f64) -> f64 {
        let a = self.shape;
        self.data
            .iter()
            .map(|y| {
                let b_post = self.rate + 0.5 * (y - theta).powi(2);
                self.log_norm + ln_gamma(a + 0.5) - (a + 0.5) * b_post.ln()
            })
            .sum()
    }

    pub fn derivative_log_marginal(&self, theta: f64) -> f64 {
        let a = self.shape;
        self.data
            .iter()
            .map(|y| (a + 0.5) * (y - theta) / (self.rate + 0.5 * (y - theta).powi(2)))
            .sum()
    }

    /// Stationary points of the marginal likelihood on `[lo, hi]`, found by
    /// bisection on sign changes of the derivative over a fine grid.
    pub fn marginal_stationary_points(&self, lo: f64, hi: f64, cells: usize) -> Vec<f64> {
        let f = |t: f64| self.derivative_log_marginal(t);
        let h = (hi - lo) / cells as f64;
        let mut out = Vec::new();
        for k in 0..cells {
            let (mut a, mut b) = (lo + k as f64 * h, lo + (k + 1) as f64 * h);
            let (fa, fb) = (f(a), f(b));
            if fa == 0.0 {
                out.push(a);
                continue;
            }
            if fa * fb >= 0.0 {
                continue;
            }
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if f(m) * f(a) > 0.0 {
                    a = m;
                } else {
                    b = m;
                }
            }
            out.push(0.5 * (a + b));
        }
        out
    }

    /// The stationary point with the largest marginal likelihood.
    pub fn global_maximizer(&self, lo: f64, hi: f64) -> f64 {
        self.marginal_stationary_points(lo, hi, 20_000)
            .into_iter()
            .max_by(|a, b| self.log_marginal(*a).total_cmp(&self.log_marginal(*b)))
            .expect("marginal likelihood has a stationary point in the bracket")
    }
}

impl LatentModel for MultimodalModel {
    fn latent_space(&self) -> LatentSpace {
        LatentSpace::Continuous { dim: self.data.len() }
    }

    fn theta_dim(&self) -> usize {
        1
    }

    fn log_joint(&self, theta: &[f64], x: &LatentPoint) -> f64 {
        let t = theta[0];
        let mut total = 0.0;
        for (xj, yj) in x.real().iter().zip(&self.data) {
            if !(*xj > 0.0) {
                return f64::NEG_INFINITY;
            }
            total += self.log_norm + (self.shape - 0.5) * xj.ln() - self.rate * xj - 0.5 * xj * (yj - t).powi(2);
        }
        total
    }

    fn grad_theta_u(&self, theta: &[f64], x: &LatentPoint) -> Vec<f64> {
        let t = theta[0];
        vec![-x.real().iter().zip(&self.data).map(|(xj, yj)| xj * (yj - t)).sum::<f64>()]
    }

    /// Not Lipschitz: blows up like `1 / x` near the boundary.
    fn grad_x_u(&self, theta: &[f64], x: &LatentPoint) -> Option<Vec<f64>> {
        let t = theta[0];
        Some(
            x.real()
                .iter()
                .zip(&self.data)
                .map(|(xj, yj)| -(self.shape - 0.5) / xj + self.rate + 0.5 * (yj - t).powi(2))
                .collect(),
        )
    }

    fn log_joint_many(&self, thetas: &[&[f64]], x: &LatentPoint) -> Vec<f64> {
        let x = x.real();
        if x.iter().any(|v| !(*v > 0.0)) {
            return vec![f64::NEG_INFINITY; thetas.len()];
        }
        // theta-free part plus sum_j x_j (y_j - t)^2 expanded in t
        let base: f64 = x
            .iter()
            .map(|xj| self.log_norm + (self.shape - 0.5) * xj.ln() - self.rate * xj)
            .sum();
        let sx: f64 = x.iter().sum();
        let sxy: f64 = x.iter().zip(&self.data).map(|(a, b)| a * b).sum();
        let sxyy: f64 = x.iter().zip(&self.data).map(|(a, b)| a * b * b).sum();
        thetas
            .iter()
            .map(|t| {
                let t = t[0];
                base - 0.5 * (sxyy - 2.0 * t * sxy + t * t * sx)
            })
            .collect()
    }

    fn log_prior0(&self, x: &LatentPoint) -> f64 {
        let x = x.real();
        if x.iter().any(|v| !(*v > 0.0)) {
            return f64::NEG_INFINITY;
        }
        -x.iter().sum::<f64>()
    }

    fn sample_prior0(&self, rng: &mut SmcRng) -> LatentPoint {
        let g = Gamma::new(1.0, 1.0).expect("valid gamma");
        LatentPoint::Real((0..self.data.len()).map(|_| g.sample(rng)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::grad_theta_fd_error;
    use crate::rng::RngStream;
    use approx::assert_relative_eq;
    use rand::Rng;

    /// `log int_0^inf Gamma(x; a, b) N(y; theta, 1/x) dx` by the trapezoid
    /// rule on a log-spaced grid.
    fn quadrature_log_marginal(m: &MultimodalModel, theta: f64) -> f64 {
        let (lo, hi, n) = (-30.0f64, 8.0f64, 4_000);
        let h = (hi - lo) / n as f64;
        m.data
            .iter()
            .map(|y| {
                let mut acc = 0.0;
                for k in 0..=n {
                    let u = lo + k as f64 * h;
                    let x = u.exp();
                    let log_gamma = m.shape * m.rate.ln() - ln_gamma(m.shape) + (m.shape - 1.0) * x.ln() - m.rate * x;
                    let log_normal = 0.5 * x.ln() - 0.5 * LN_2PI - 0.5 * x * (y - theta).powi(2);
                    // dx = x du
                    let f = (log_gamma + log_normal + u).exp();
                    acc += if k == 0 || k == n { 0.5 * f } else { f };
                }
                (acc * h).ln()
            })
            .sum()
    }

    #[test]
    fn closed_form_marginal_matches_quadrature() {
        let m = MultimodalModel::default();
        for t in [-19.0, 0.0, 1.0, 1.997, 2.9] {
            assert_relative_eq!(m.log_marginal(t), quadrature_log_marginal(&m, t), epsilon = 1e-6);
        }
    }

    #[test]
    fn quadrature_locates_the_global_maximum() {
        let m = MultimodalModel::default();
        let grid: Vec<f64> = (0..=3000).map(|k| -25.0 + k as f64 * 0.01).collect();
        let best = grid
            .iter()
            .copied()
            .max_by(|a, b| quadrature_log_marginal(&m, *a).total_cmp(&quadrature_log_marginal(&m, *b)))
            .unwrap();
        assert!((best - 1.997).abs() <= 0.01, "quadrature argmax {best}");
        assert!((m.global_maximizer(-25.0, 5.0) - 1.997).abs() <= 0.01);
    }

    #[test]
    fn marginal_has_several_modes() {
        let m = MultimodalModel::default();
        let pts = m.marginal_stationary_points(-25.0, 5.0, 20_000);
        let maxima = pts
            .iter()
            .filter(|t| m.derivative_log_marginal(**t - 1e-4) > 0.0 && m.derivative_log_marginal(**t + 1e-4) < 0.0)
            .count();
        assert!(maxima >= 3, "stationary points {pts:?}");
    }

    #[test]
    fn joint_integrates_to_the_marginal() {
        // trapezoid in log x for a single coordinate model
        let m = MultimodalModel::new(vec![1.5], DEFAULT_SHAPE, DEFAULT_RATE);
        let (lo, hi, n) = (-30.0f64, 8.0f64, 4_000);
        let h = (hi - lo) / n as f64;
        let mut acc = 0.0;
        for k in 0..=n {
            let u = lo + k as f64 * h;
            let f = (m.log_joint(&[0.4], &LatentPoint::Real(vec![u.exp()])) + u).exp();
            acc += if k == 0 || k == n { 0.5 * f } else { f };
        }
        assert_relative_eq!((acc * h).ln(), m.log_marginal(0.4), epsilon = 1e-6);
    }

    #[test]
    fn conditional_posterior_matches_the_joint() {
        // log p(x, y) - log Gamma(x; a', b') is constant in x
        let m = MultimodalModel::default();
        let t = 0.7;
        let (a, b) = m.conditional_posterior(t, 2);
        let diff = |x: f64| {
            let mut pt = vec![1.0; 4];
            pt[2] = x;
            m.log_joint(&[t], &LatentPoint::Real(pt)) - ((a - 1.0) * x.ln() - b * x)
        };
        assert_relative_eq!(diff(0.3), diff(4.0), epsilon = 1e-10);
    }

    #[test]
    fn outside_support_is_minus_infinity() {
        let m = MultimodalModel::default();
        let x = LatentPoint::Real(vec![1.0, -0.1, 1.0, 1.0]);
        assert_eq!(m.log_joint(&[0.0], &x), f64::NEG_INFINITY);
        assert_eq!(m.log_joint_many(&[&[0.0]], &x), vec![f64::NEG_INFINITY]);
        assert_eq!(m.log_prior0(&x), f64::NEG_INFINITY);
    }

    #[test]
    fn fast_path_and_gradients() {
        let m = MultimodalModel::default();
        let mut r = RngStream::new(1).rng();
        for _ in 0..20 {
            let x = m.sample_prior0(&mut r);
            let t = [r.random_range(-5.0..5.0)];
            assert_relative_eq!(m.log_joint_many(&[&t], &x)[0], m.log_joint(&t, &x), max_relative = 1e-12);
            assert!(grad_theta_fd_error(&m, &t, &x, 1e-5) < 1e-6);
            let gx = m.grad_x_u(&t, &x).unwrap();
            for j in 0..4 {
                let mut hi = x.real().to_vec();
                let mut lo = x.real().to_vec();
                let h = 1e-6 * x.real()[j];
                hi[j] += h;
                lo[j] -= h;
                let fd = -(m.log_joint(&t, &LatentPoint::Real(hi)) - m.log_joint(&t, &LatentPoint::Real(lo))) / (2.0 * h);
                assert!((fd - gx[j]).abs() < 1e-4 * gx[j].abs().max(1.0));
            }
        }
    }
}
