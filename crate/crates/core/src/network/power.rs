use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Price factor charged per unit of D2D transmit power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "value", rename_all = "lowercase")]
pub enum Price {
    /// Same `c` for every D2D user.
    Scalar(f64),
    /// `c_k = c0 * g_kl`, with `l` the cellular user on `k`'s channel.
    Proportional(f64),
}

impl Price {
    pub fn base(&self) -> f64 {
        match *self {
            Price::Scalar(c) | Price::Proportional(c) => c,
        }
    }

    /// Price for one D2D user given the path-loss gain to the cellular
    /// receiver it shares a channel with.
    pub fn for_user(&self, pathloss_to_cellular: f64) -> f64 {
        match *self {
            Price::Scalar(c) => c,
            Price::Proportional(c0) => c0 * pathloss_to_cellular,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerConfig {
    /// BS transmit power `p_c` per cellular stream.
    pub bs_power: f64,
    /// D2D power levels `p_d^(1) < ... < p_d^(M)`, all above one.
    pub levels: Vec<f64>,
    pub price: Price,
}

impl PowerConfig {
    pub fn new(bs_power: f64, levels: Vec<f64>, price: Price) -> Result<Self> {
        let cfg = Self { bs_power, levels, price };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let Some(&first) = self.levels.first() else {
            return Err(Error::InvalidPower("no D2D power levels".into()));
        };
        if !(first > 1.0) {
            return Err(Error::InvalidPower(format!("lowest level {first} must exceed 1")));
        }
        if self.levels.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidPower("power levels must be strictly increasing".into()));
        }
        let top = self.max_level();
        if !(top < self.bs_power) || !self.bs_power.is_finite() {
            return Err(Error::InvalidPower(format!(
                "BS power {} must exceed the top D2D level {top}",
                self.bs_power
            )));
        }
        let c = self.price.base();
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::InvalidPower(format!("price factor {c} must be >= 0")));
        }
        Ok(())
    }

    pub fn min_level(&self) -> f64 {
        self.levels[0]
    }

    /// `p_d^(M)`.
    pub fn max_level(&self) -> f64 {
        *self.levels.last().expect("validated non-empty")
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }
}
