//! Q-learning better-reply dynamics for finite games with noisy rewards.

mod dynamics;
mod stats;

pub use dynamics::{better_reply_distribution, q_update, run, run_from, LearnerState, LearningTrace, TrialRecord};
pub use stats::{convergence_stats, ConvergenceReport, FINAL_WINDOW};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LearnerParams {
    pub c_lambda: f64,
    pub c_epsilon: f64,
    pub rho_lambda: f64,
    /// Inertia: probability of repeating the previous action when exploiting.
    pub zeta: f64,
    pub memory: usize,
    pub horizon: usize,
    /// Replaces the exploration schedule with a constant when set.
    #[serde(default)]
    pub epsilon_override: Option<f64>,
}

impl Default for LearnerParams {
    fn default() -> Self {
        Self {
            c_lambda: 1.0,
            c_epsilon: 1.0,
            rho_lambda: 0.5,
            zeta: 0.5,
            memory: 12,
            horizon: 2000,
            epsilon_override: None,
        }
    }
}

impl LearnerParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParams(m.into()));
        if !(self.c_lambda > 0.0) || !(self.c_epsilon > 0.0) {
            return bad("c_lambda and c_epsilon must be positive");
        }
        if !(0.5..=1.0).contains(&self.rho_lambda) {
            return bad("rho_lambda must lie in [0.5, 1]");
        }
        if !(0.0..1.0).contains(&self.zeta) {
            return bad("zeta must lie in [0, 1)");
        }
        if self.memory == 0 || self.horizon == 0 {
            return bad("memory and horizon must be positive");
        }
        if let Some(e) = self.epsilon_override {
            if !(0.0..=1.0).contains(&e) {
                return bad("epsilon override must be a probability");
            }
        }
        Ok(())
    }

    pub fn epsilon(&self, t: usize, players: usize) -> f64 {
        self.epsilon_override.unwrap_or_else(|| epsilon_schedule(t, self.c_epsilon, players))
    }
}

/// `min(1, c t^(-1/K))`.
pub fn epsilon_schedule(t: usize, c_epsilon: f64, players: usize) -> f64 {
    assert!(t >= 1, "trials are numbered from 1");
    (c_epsilon * (t as f64).powf(-1.0 / players.max(1) as f64)).clamp(0.0, 1.0)
}

/// `(c + count)^(-rho)`.
pub fn learning_rate(c_lambda: f64, count: u64, rho_lambda: f64) -> f64 {
    (c_lambda + count as f64).powf(-rho_lambda)
}

/// Additive reward noise, uniform on `[-b, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseModel {
    pub half_width: f64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self { half_width: 0.1 }
    }
}

impl NoiseModel {
    pub fn new(half_width: f64) -> Result<Self> {
        if !(half_width >= 0.0) || !half_width.is_finite() {
            return Err(Error::InvalidParams("noise half-width must be finite and non-negative".into()));
        }
        Ok(Self { half_width })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.half_width == 0.0 {
            0.0
        } else {
            rng.gen_range(-self.half_width..=self.half_width)
        }
    }

    pub fn variance(&self) -> f64 {
        self.half_width * self.half_width / 3.0
    }
}
