use serde::{Deserialize, Serialize};

use super::potential::PotentialFunction;
use super::strategic::StrategicGame;
use crate::network::{ChannelAllocation, Scenario};
use crate::{Error, Result};

/// Gains and prices seen by the D2D users sharing one channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterModel {
    /// Global D2D indices, in player order.
    pub members: Vec<usize>,
    /// `h_kk'` per player.
    pub direct: Vec<f64>,
    /// `cross[j][k]`: gain from transmitter of player `j` to receiver of player `k`.
    pub cross: Vec<Vec<f64>>,
    /// `p_c h_bk'` per player.
    pub bs_interference: Vec<f64>,
    pub prices: Vec<f64>,
    pub levels: Vec<f64>,
}

/// Upper bound on the price of stability; `bound` is `None` when
/// `gamma_min <= 1` and the bound says nothing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PosBound {
    pub gamma_min: f64,
    pub bound: Option<f64>,
}

impl ClusterModel {
    pub fn new(
        direct: Vec<f64>,
        cross: Vec<Vec<f64>>,
        bs_interference: Vec<f64>,
        prices: Vec<f64>,
        levels: Vec<f64>,
    ) -> Result<Self> {
        let n = direct.len();
        if n == 0 {
            return Err(Error::EmptyCluster(0));
        }
        if cross.len() != n || cross.iter().any(|r| r.len() != n) || bs_interference.len() != n || prices.len() != n
        {
            return Err(Error::InvalidGame("cluster gain arrays disagree on player count".into()));
        }
        if levels.is_empty() || levels.iter().any(|&p| !(p > 0.0)) {
            return Err(Error::InvalidGame("power levels must be positive".into()));
        }
        if direct.iter().any(|&h| !(h > 0.0)) || bs_interference.iter().any(|&x| !(x >= 0.0)) {
            return Err(Error::InvalidGame("gains must be positive".into()));
        }
        Ok(Self { members: (0..n).collect(), direct, cross, bs_interference, prices, levels })
    }

    /// Builds the model for channel `q` of `alloc`.
    pub fn from_scenario(scenario: &Scenario, alloc: &ChannelAllocation, q: usize) -> Result<Self> {
        let members = alloc.d2d_on(q);
        if members.is_empty() {
            return Err(Error::EmptyCluster(q));
        }
        let cellular = alloc.cellular_on(q).first().copied();
        let pc = scenario.power.bs_power;
        let direct = members.iter().map(|&k| scenario.d2d_to_d2d(k, k, q)).collect();
        let cross = members
            .iter()
            .map(|&j| members.iter().map(|&k| if j == k { 0.0 } else { scenario.d2d_to_d2d(j, k, q) }).collect())
            .collect();
        let bs_interference =
            members.iter().map(|&k| if cellular.is_some() { pc * scenario.bs_to_d2d_rx(k, q) } else { 0.0 }).collect();
        let prices = members.iter().map(|&k| scenario.d2d_price(k, cellular)).collect::<Result<_>>()?;
        Ok(Self { members, direct, cross, bs_interference, prices, levels: scenario.power.levels.clone() })
    }

    pub fn players(&self) -> usize {
        self.direct.len()
    }

    pub fn sir(&self, powers: &[f64]) -> Vec<f64> {
        (0..self.players())
            .map(|k| {
                let interference: f64 =
                    (0..self.players()).filter(|&j| j != k).map(|j| powers[j] * self.cross[j][k]).sum();
                powers[k] * self.direct[k] / (1.0 + interference + self.bs_interference[k])
            })
            .collect()
    }

    /// `ln(SIR_k) - c_k p_k` per player.
    pub fn payoff(&self, powers: &[f64]) -> Vec<f64> {
        self.sir(powers).iter().zip(powers).zip(&self.prices).map(|((s, p), c)| s.ln() - c * p).collect()
    }

    fn powers(&self, profile: &[usize]) -> Vec<f64> {
        profile.iter().map(|&i| self.levels[i]).collect()
    }

    pub fn game(&self) -> Result<StrategicGame> {
        StrategicGame::from_fn(vec![self.levels.clone(); self.players()], |a| Ok(self.payoff(&self.powers(a))))
    }

    pub fn potential(&self) -> Result<PotentialFunction> {
        PotentialFunction::power_potential(&vec![self.levels.clone(); self.players()], &self.prices)
    }

    /// Worst-case SIR: every player at the lowest level, every interferer
    /// at the highest.
    pub fn gamma_min(&self) -> f64 {
        let lo = self.levels.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.levels.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (0..self.players())
            .map(|k| {
                let interference: f64 = (0..self.players()).filter(|&j| j != k).map(|j| hi * self.cross[j][k]).sum();
                lo * self.direct[k] / (1.0 + interference + self.bs_interference[k])
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// `ln(p_max) / ln(gamma_min)`.
    pub fn pos_upper_bound(&self) -> PosBound {
        let gamma_min = self.gamma_min();
        let hi = self.levels.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let bound = (gamma_min > 1.0).then(|| hi.ln() / gamma_min.ln());
        PosBound { gamma_min, bound }
    }
}

pub fn cluster_game(scenario: &Scenario, alloc: &ChannelAllocation, q: usize) -> Result<StrategicGame> {
    ClusterModel::from_scenario(scenario, alloc, q)?.game()
}

/// Power minimisation under per-player SIR targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QosPowerGame {
    /// Payoff `-p_k`; admissible exactly where every target is met.
    pub game: StrategicGame,
    pub feasible_profiles: Vec<usize>,
}

impl QosPowerGame {
    /// `v = -sum_k p_k`.
    pub fn potential(&self) -> Result<PotentialFunction> {
        let comps = self.game.action_sets().iter().map(|ls| ls.iter().map(|p| -p).collect()).collect();
        PotentialFunction::separable(comps)
    }
}

pub fn qos_power_game(model: &ClusterModel, targets: &[f64]) -> Result<QosPowerGame> {
    if targets.len() != model.players() {
        return Err(Error::InvalidGame("one SIR target per player required".into()));
    }
    let game =
        StrategicGame::from_fn(vec![model.levels.clone(); model.players()], |a| {
            Ok(model.powers(a).iter().map(|p| -p).collect())
        })?;
    let mask: Vec<bool> = (0..game.profile_count())
        .map(|i| {
            let sir = model.sir(&model.powers(&game.space().decode(i)));
            sir.iter().zip(targets).all(|(s, t)| s >= t)
        })
        .collect();
    let feasible_profiles: Vec<usize> = (0..mask.len()).filter(|&i| mask[i]).collect();
    if feasible_profiles.is_empty() {
        return Err(Error::NoFeasibleProfile);
    }
    Ok(QosPowerGame { game: game.with_admissible(mask)?, feasible_profiles })
}
