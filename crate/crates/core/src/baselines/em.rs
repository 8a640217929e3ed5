//! EM for the symmetric two-component mixture with known `alpha`.
//!
//! The complete-data log-likelihood is
//! `sum_i [z_i log alpha + (1 - z_i) log(1 - alpha) - (y_i - s_i theta)^2 / 2]`
//! with `s_i = 2 z_i - 1`. Its expectation under the responsibilities
//! `r_i = P(z_i = 1 | y_i, theta)` is quadratic in `theta`, with the
//! maximizer `theta = mean((2 r_i - 1) y_i)` because `s_i^2 = 1`.

use crate::trace::{IterationRecord, RunTrace};

/// One EM update from `theta`.
pub fn em_gmm_step(data: &[f64], alpha: f64, theta: f64) -> f64 {
    let log_odds_prior = if alpha >= 1.0 { f64::INFINITY } else { (alpha / (1.0 - alpha)).ln() };
    let total: f64 = data
        .iter()
        .map(|y| {
            // log N(y; theta, 1) - log N(y; -theta, 1) = 2 y theta
            let z = log_odds_prior + 2.0 * y * theta;
            let r = if z >= 0.0 { 1.0 / (1.0 + (-z).exp()) } else { z.exp() / (1.0 + z.exp()) };
            (2.0 * r - 1.0) * y
        })
        .sum();
    total / data.len() as f64
}

pub fn em_gmm(data: &[f64], alpha: f64, theta0: f64, horizon: usize) -> RunTrace {
    assert!(!data.is_empty(), "EM needs data");
    let mut trace = RunTrace::default();
    trace.meta("algorithm", "em");
    trace.meta("horizon", horizon);
    let record = |iter, theta| IterationRecord {
        iter,
        theta: vec![theta],
        ess: f64::NAN,
        accept: f64::NAN,
        elapsed_ns: 0,
    };
    let start = std::time::Instant::now();
    let mut theta = theta0;
    trace.records.push(record(0, theta));
    for n in 1..=horizon {
        theta = em_gmm_step(data, alpha, theta);
        let mut r = record(n, theta);
        r.elapsed_ns = start.elapsed().as_nanos() as u64;
        trace.records.push(r);
    }
    trace
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{gmm_marginal_loglik, GmmModel};
    use crate::rng::RngStream;
    use approx::assert_relative_eq;

    /// Expected complete-data log-likelihood at `t` with responsibilities from `theta`.
    fn q_function(data: &[f64], alpha: f64, theta: f64, t: f64) -> f64 {
        data.iter()
            .map(|y| {
                let a = alpha.ln() - 0.5 * (y - theta).powi(2);
                let b = (1.0 - alpha).ln() - 0.5 * (y + theta).powi(2);
                let r = 1.0 / (1.0 + (b - a).exp());
                r * (-0.5 * (y - t).powi(2)) + (1.0 - r) * (-0.5 * (y + t).powi(2))
            })
            .sum()
    }

    fn grid_argmax(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
        // coarse grid followed by golden-section refinement
        let n = 2000;
        let h = (hi - lo) / n as f64;
        let k = (0..=n).max_by(|a, b| f(lo + *a as f64 * h).total_cmp(&f(lo + *b as f64 * h))).unwrap();
        let (mut a, mut b) = (lo + (k as f64 - 1.0) * h, lo + (k as f64 + 1.0) * h);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let (c, d) = (b - g * (b - a), a + g * (b - a));
            if f(c) > f(d) {
                b = d;
            } else {
                a = c;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn single_datum_step() {
        let next = em_gmm_step(&[2.0], 0.5, 1.0);
        let r = 1.0 / (1.0 + (-4.0f64).exp());
        assert_relative_eq!(next, (2.0 * r - 1.0) * 2.0, epsilon = 1e-15);
        assert_relative_eq!(next, 1.928055160151634, epsilon = 1e-12);
        let oracle = grid_argmax(|t| q_function(&[2.0], 0.5, 1.0, t), -5.0, 5.0);
        assert!((oracle - next).abs() < 1e-6);
    }

    #[test]
    fn step_maximizes_the_q_function() {
        let data = GmmModel::simulate(1.0, 0.7, 200, &mut RngStream::new(1).rng());
        for theta in [-2.0, -0.3, 0.4, 1.5] {
            let next = em_gmm_step(&data, 0.7, theta);
            let oracle = grid_argmax(|t| q_function(&data, 0.7, theta, t), -5.0, 5.0);
            assert!((oracle - next).abs() < 1e-6, "{next} vs {oracle}");
        }
    }

    #[test]
    fn single_component_converges_in_one_step() {
        let data = [0.5, 1.5, 2.2, 0.8];
        let t = em_gmm(&data, 1.0, -3.0, 2);
        let mean = data.iter().sum::<f64>() / 4.0;
        assert_relative_eq!(t.records[1].theta[0], mean, epsilon = 1e-15);
    }

    #[test]
    fn marginal_likelihood_never_decreases() {
        for (alpha, seed) in [(0.55, 2), (0.9, 3), (0.7, 4)] {
            let data = GmmModel::simulate(1.0, alpha, 300, &mut RngStream::new(seed).rng());
            let t = em_gmm(&data, alpha, -2.0, 60);
            let ll: Vec<f64> = t.thetas().iter().map(|th| gmm_marginal_loglik(th[0], &data, alpha)).collect();
            assert!(ll.windows(2).all(|w| w[1] >= w[0] - 1e-9));
        }
    }
}
