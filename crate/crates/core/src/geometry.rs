//! Mirror maps `grad h`, their inverses and Bregman divergences.
//!
//! Three potentials are supported:
//!
//! * `SquaredNorm`: `h(t) = |t|^2 / 2` on all of `R^d` (plain gradient descent).
//! * `ComponentLogBarrier`: `h(t) = -sum_i log(t_i - t_i^2)` on `(0, 1)^d`.
//! * `SimplexEntropy`: `h(u) = sum_i u_i log u_i` on the open simplex over a
//!   block of coordinates, squared norm on the remaining ones.

use std::ops::Range;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MirrorMap {
    SquaredNorm,
    ComponentLogBarrier,
    SimplexEntropy { block: Range<usize> },
}

const SIMPLEX_TOL: f64 = 1e-9;

impl MirrorMap {
    /// Fails with `DomainViolation` at the first offending component.
    pub fn check_domain(&self, theta: &[f64]) -> Result<()> {
        for (i, &t) in theta.iter().enumerate() {
            let ok = match self {
                Self::SquaredNorm => t.is_finite(),
                Self::ComponentLogBarrier => t > 0.0 && t < 1.0,
                Self::SimplexEntropy { block } if block.contains(&i) => t > 0.0 && t < 1.0,
                Self::SimplexEntropy { .. } => t.is_finite(),
            };
            if !ok {
                return Err(Error::DomainViolation { index: i, value: t });
            }
        }
        if let Self::SimplexEntropy { block } = self {
            if block.end > theta.len() || block.is_empty() {
                return Err(Error::InvalidConfig(format!(
                    "simplex block {block:?} does not fit a {}-vector",
                    theta.len()
                )));
            }
            let total: f64 = theta[block.clone()].iter().sum();
            if (total - 1.0).abs() > SIMPLEX_TOL {
                return Err(Error::DomainViolation {
                    index: block.start,
                    value: total,
                });
            }
        }
        Ok(())
    }

    /// `grad h(theta)`.
    pub fn forward(&self, theta: &[f64]) -> Result<Vec<f64>> {
        self.check_domain(theta)?;
        Ok(match self {
            Self::SquaredNorm => theta.to_vec(),
            Self::ComponentLogBarrier => theta.iter().map(|&t| barrier_grad(t)).collect(),
            Self::SimplexEntropy { block } => theta
                .iter()
                .enumerate()
                .map(|(i, &t)| if block.contains(&i) { 1.0 + t.ln() } else { t })
                .collect(),
        })
    }

    /// `(grad h)^{-1}(dual)`.
    pub fn inverse(&self, dual: &[f64]) -> Result<Vec<f64>> {
        if let Some(index) = dual.iter().position(|d| !d.is_finite()) {
            return Err(Error::NonFiniteDual { index });
        }
        let theta = match self {
            Self::SquaredNorm => dual.to_vec(),
            Self::ComponentLogBarrier => dual.iter().map(|&d| barrier_grad_inverse(d)).collect(),
            Self::SimplexEntropy { block } => {
                if block.end > dual.len() || block.is_empty() {
                    return Err(Error::InvalidConfig(format!(
                        "simplex block {block:?} does not fit a {}-vector",
                        dual.len()
                    )));
                }
                let mut theta = dual.to_vec();
                let max = dual[block.clone()].iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let exps: Vec<f64> = dual[block.clone()].iter().map(|d| (d - max).exp()).collect();
                let total: f64 = exps.iter().sum();
                for (slot, e) in theta[block.clone()].iter_mut().zip(exps) {
                    *slot = e / total;
                }
                theta
            }
        };
        // round-off can land exactly on the boundary for extreme duals
        self.check_domain(&theta)?;
        Ok(theta)
    }

    /// `B_h(a | b) = h(a) - h(b) - <grad h(b), a - b>`.
    pub fn bregman(&self, a: &[f64], b: &[f64]) -> Result<f64> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch {
                left: a.len(),
                right: b.len(),
            });
        }
        self.check_domain(a)?;
        self.check_domain(b)?;
        let mut total = 0.0;
        for (i, (&ai, &bi)) in a.iter().zip(b).enumerate() {
            total += match self {
                Self::SquaredNorm => 0.5 * (ai - bi).powi(2),
                Self::ComponentLogBarrier => barrier(ai) - barrier(bi) - barrier_grad(bi) * (ai - bi),
                Self::SimplexEntropy { block } if block.contains(&i) => {
                    ai * ai.ln() - bi * bi.ln() - (1.0 + bi.ln()) * (ai - bi)
                }
                Self::SimplexEntropy { .. } => 0.5 * (ai - bi).powi(2),
            };
        }
        Ok(total)
    }
}

fn barrier(t: f64) -> f64 {
    -(t.ln() + (1.0 - t).ln())
}

fn barrier_grad(t: f64) -> f64 {
    1.0 / (1.0 - t) - 1.0 / t
}

/// Inverse of `t -> 1/(1-t) - 1/t`. The textbook root
/// `(d - 2 + sqrt(d^2 + 4)) / (2d)` is 0/0 at `d = 0`; multiplying through by
/// the conjugate gives `2 / (sqrt(d^2 + 4) + 2 - d)`, which equals 1/2 there
/// and does not cancel for small `|d|`.
fn barrier_grad_inverse(d: f64) -> f64 {
    2.0 / ((d * d + 4.0).sqrt() + 2.0 - d)
}

/// A parameter vector together with its image under the active mirror map.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaState {
    pub theta: Vec<f64>,
    pub dual: Vec<f64>,
}

impl ThetaState {
    pub fn new(map: &MirrorMap, theta: Vec<f64>) -> Result<Self> {
        let dual = map.forward(&theta)?;
        Ok(Self { theta, dual })
    }

    /// One mirror step: `theta' = (grad h)^{-1}(grad h(theta) - gamma * grad)`.
    pub fn mirror_step(&self, map: &MirrorMap, grad: &[f64], gamma: f64) -> Result<Self> {
        if grad.len() != self.dual.len() {
            return Err(Error::LengthMismatch {
                left: grad.len(),
                right: self.dual.len(),
            });
        }
        let dual: Vec<f64> = self.dual.iter().zip(grad).map(|(d, g)| d - gamma * g).collect();
        let theta = map.inverse(&dual)?;
        Ok(Self { theta, dual })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn squared_norm_is_identity() {
        let m = MirrorMap::SquaredNorm;
        assert_eq!(m.forward(&[2.0, -1.0]).unwrap(), vec![2.0, -1.0]);
        assert_eq!(m.inverse(&[0.3]).unwrap(), vec![0.3]);
        assert_eq!(m.bregman(&[1.0, 0.0], &[0.0, 0.0]).unwrap(), 0.5);
    }

    #[test]
    fn barrier_forward_values() {
        let m = MirrorMap::ComponentLogBarrier;
        assert_eq!(m.forward(&[0.5]).unwrap(), vec![0.0]);
        assert_relative_eq!(m.forward(&[0.2]).unwrap()[0], -3.75, epsilon = 1e-14);
    }

    #[test]
    fn barrier_inverse_values() {
        let m = MirrorMap::ComponentLogBarrier;
        assert_eq!(m.inverse(&[0.0]).unwrap(), vec![0.5]);
        // (-3.75 - 2 + sqrt(14.0625 + 4)) / (2 * -3.75) = (-5.75 + 4.25) / -7.5
        let textbook = (-3.75 - 2.0 + (3.75f64 * 3.75 + 4.0).sqrt()) / (2.0 * -3.75);
        assert_relative_eq!(textbook, 0.2, epsilon = 1e-14);
        assert_relative_eq!(m.inverse(&[-3.75]).unwrap()[0], 0.2, epsilon = 1e-14);
    }

    #[test]
    fn barrier_inverse_matches_textbook_root_away_from_zero() {
        for &d in &[-50.0, -3.0, -0.5, 0.1, 2.0, 40.0] {
            let textbook = (d - 2.0 + (d * d + 4.0f64).sqrt()) / (2.0 * d);
            assert_relative_eq!(barrier_grad_inverse(d), textbook, max_relative = 1e-10);
        }
    }

    #[test]
    fn barrier_bregman_regression() {
        // direct evaluation: h(t) = -log(t - t^2)
        let h = |t: f64| -(t - t * t).ln();
        let hp = |t: f64| 1.0 / (1.0 - t) - 1.0 / t;
        let oracle = h(0.5) - h(0.25) - hp(0.25) * 0.25;
        let m = MirrorMap::ComponentLogBarrier;
        let got = m.bregman(&[0.5], &[0.25]).unwrap();
        assert_relative_eq!(got, oracle, epsilon = 1e-14);
        assert_relative_eq!(got, 0.378_984_594_214_885_7, epsilon = 1e-12);
        assert_eq!(m.bregman(&[0.3, 0.7], &[0.3, 0.7]).unwrap(), 0.0);
    }

    #[test]
    fn domain_violations() {
        let m = MirrorMap::ComponentLogBarrier;
        assert_eq!(
            m.forward(&[0.5, 1.0]),
            Err(Error::DomainViolation { index: 1, value: 1.0 })
        );
        assert!(m.bregman(&[0.0], &[0.5]).is_err());
        assert_eq!(m.inverse(&[f64::NAN]), Err(Error::NonFiniteDual { index: 0 }));
        // a dual this large rounds to exactly 1
        assert!(matches!(m.inverse(&[1e17]), Err(Error::DomainViolation { .. })));
    }

    #[test]
    fn simplex_entropy_roundtrip_and_kl() {
        let m = MirrorMap::SimplexEntropy { block: 0..3 };
        let theta = [0.2, 0.3, 0.5, -4.0];
        let back = m.inverse(&m.forward(&theta).unwrap()).unwrap();
        for (a, b) in theta.iter().zip(&back) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
        let a: [f64; 4] = [0.2, 0.3, 0.5, 1.0];
        let b: [f64; 4] = [0.4, 0.4, 0.2, 0.0];
        let kl: f64 = (0..3).map(|i| a[i] * (a[i] / b[i]).ln()).sum();
        assert_relative_eq!(m.bregman(&a, &b).unwrap(), kl + 0.5, epsilon = 1e-12);
        assert!(m.forward(&[0.2, 0.2, 0.2, 0.0]).is_err());
    }

    #[test]
    fn squared_norm_step_is_gradient_descent() {
        let m = MirrorMap::SquaredNorm;
        let s = ThetaState::new(&m, vec![1.0, -2.0]).unwrap();
        let next = s.mirror_step(&m, &[0.5, 3.0], 0.1).unwrap();
        assert_eq!(next.theta, vec![1.0 - 0.1 * 0.5, -2.0 - 0.1 * 3.0]);
    }

    fn unit_interval() -> impl Strategy<Value = f64> {
        (1e-6f64..1.0 - 1e-6).prop_filter("interior", |t| *t > 0.0 && *t < 1.0)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn barrier_roundtrip(theta in prop::collection::vec(unit_interval(), 1..6)) {
            let m = MirrorMap::ComponentLogBarrier;
            let back = m.inverse(&m.forward(&theta).unwrap()).unwrap();
            for (a, b) in theta.iter().zip(&back) {
                prop_assert!((a - b).abs() < 1e-9);
            }
        }

        #[test]
        fn barrier_bregman_dominates_half_squared_distance(a in unit_interval(), b in unit_interval()) {
            let m = MirrorMap::ComponentLogBarrier;
            let d = m.bregman(&[a], &[b]).unwrap();
            prop_assert!(d >= 0.5 * (a - b).powi(2) - 1e-12);
            if a != b {
                prop_assert!(d > 0.0);
            }
        }

        #[test]
        fn bregman_nonnegative(a in prop::collection::vec(-10.0f64..10.0, 3), b in prop::collection::vec(-10.0f64..10.0, 3)) {
            let m = MirrorMap::SquaredNorm;
            prop_assert!(m.bregman(&a, &b).unwrap() >= 0.0);
            let m = MirrorMap::SimplexEntropy { block: 0..3 };
            let norm = |v: &[f64]| {
                let e: Vec<f64> = v.iter().map(|x| x.exp()).collect();
                let s: f64 = e.iter().sum();
                e.into_iter().map(|x| x / s).collect::<Vec<f64>>()
            };
            let (pa, pb) = (norm(&a), norm(&b));
            if pa.iter().chain(&pb).all(|p| *p > 0.0 && *p < 1.0) {
                prop_assert!(m.bregman(&pa, &pb).unwrap() >= -1e-12);
            }
        }
    }
}
