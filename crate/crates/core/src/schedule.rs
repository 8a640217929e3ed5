//! Step-size sequences and the tempering exponents they induce.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepRule {
    /// `gamma_n = gamma` for every n.
    Constant(f64),
    /// `gamma_n = 1 / n`.
    Harmonic,
}

/// `(gamma_1, ..., gamma_T)` with cached products `c_n = prod_{k<=n} (1 - gamma_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSchedule {
    rule: StepRule,
    gammas: Vec<f64>,
    // cumulative[n] = c_n, cumulative[0] = 1
    cumulative: Vec<f64>,
}

impl StepSchedule {
    pub fn new(rule: StepRule, horizon: usize) -> Result<Self> {
        let gammas: Vec<f64> = (1..=horizon)
            .map(|n| match rule {
                StepRule::Constant(g) => g,
                StepRule::Harmonic => 1.0 / n as f64,
            })
            .collect();
        if let Some(g) = gammas.iter().find(|g| !(**g > 0.0 && **g <= 1.0)) {
            return Err(Error::InvalidConfig(format!("step size {g} outside (0, 1]")));
        }
        let mut cumulative = Vec::with_capacity(horizon + 1);
        cumulative.push(1.0);
        for g in &gammas {
            let last = *cumulative.last().unwrap();
            cumulative.push(last * (1.0 - g));
        }
        Ok(Self {
            rule,
            gammas,
            cumulative,
        })
    }

    pub fn constant(gamma: f64, horizon: usize) -> Result<Self> {
        Self::new(StepRule::Constant(gamma), horizon)
    }

    pub fn harmonic(horizon: usize) -> Result<Self> {
        Self::new(StepRule::Harmonic, horizon)
    }

    pub fn rule(&self) -> StepRule {
        self.rule
    }

    pub fn horizon(&self) -> usize {
        self.gammas.len()
    }

    /// `gamma_n` for `1 <= n <= T`.
    pub fn gamma(&self, n: usize) -> f64 {
        assert!(n >= 1 && n <= self.gammas.len(), "step index {n} outside 1..={}", self.gammas.len());
        self.gammas[n - 1]
    }

    /// `c_n = prod_{k=1}^n (1 - gamma_k)`, with `c_0 = 1`.
    pub fn c(&self, n: usize) -> f64 {
        self.cumulative[n]
    }

    /// `lambda_n = 1 - c_n`.
    pub fn lambda(&self, n: usize) -> f64 {
        1.0 - self.cumulative[n]
    }

    /// `prod_{k=from}^{to} (1 - gamma_k)`, one when the range is empty.
    pub fn product(&self, from: usize, to: usize) -> f64 {
        (from..=to).map(|k| 1.0 - self.gamma(k)).product()
    }

    /// Exponents of the unrolled exact target at iteration n:
    /// `a_j = gamma_{j+1} prod_{k=j+2}^{n} (1 - gamma_k)` for `j = 0..n-1`.
    pub fn unrolled_exponents(&self, n: usize) -> Vec<f64> {
        let mut a = vec![0.0; n];
        let mut tail = 1.0;
        for j in (0..n).rev() {
            a[j] = self.gamma(j + 1) * tail;
            tail *= 1.0 - self.gamma(j + 1);
        }
        a
    }
}
