use serde::{Deserialize, Serialize};

use super::potential::PotentialFunction;
use super::strategic::StrategicGame;
use crate::{Error, Result};

/// Slack allowed before a deviation counts as profitable.
pub const NASH_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquilibriumKind {
    PureNash,
    PotentialMax,
}

/// Profile indices, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquilibriumSet {
    pub kind: EquilibriumKind,
    pub profiles: Vec<usize>,
}

impl EquilibriumSet {
    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn contains(&self, profile: usize) -> bool {
        self.profiles.binary_search(&profile).is_ok()
    }
}

/// Admissible profiles from which no player has a profitable admissible
/// unilateral deviation.
pub fn enumerate_nash(game: &StrategicGame) -> EquilibriumSet {
    let space = game.space();
    let profiles = game
        .admissible_profiles()
        .filter(|&a| {
            (0..space.players()).all(|k| {
                let own = game.payoff(a, k);
                let tol = NASH_TOLERANCE * (1.0 + own.abs());
                (0..space.actions(k)).all(|alt| {
                    let b = space.deviate(a, k, alt);
                    !game.is_admissible(b) || game.payoff(b, k) <= own + tol
                })
            })
        })
        .collect();
    EquilibriumSet { kind: EquilibriumKind::PureNash, profiles }
}

/// Admissible profiles attaining the maximum of `v`.
pub fn potential_maximizers(v: &PotentialFunction, game: &StrategicGame) -> EquilibriumSet {
    let best = game.admissible_profiles().map(|a| v.value(a)).fold(f64::NEG_INFINITY, f64::max);
    let tol = NASH_TOLERANCE * (1.0 + best.abs());
    let profiles = game.admissible_profiles().filter(|&a| v.value(a) >= best - tol).collect();
    EquilibriumSet { kind: EquilibriumKind::PotentialMax, profiles }
}

/// `max_a W(a) / max_{a in NE} W(a)` over admissible profiles.
pub fn price_of_stability(game: &StrategicGame, nash: &EquilibriumSet) -> Result<f64> {
    let best_nash = nash
        .profiles
        .iter()
        .map(|&a| game.welfare(a))
        .fold(None, |m: Option<f64>, w| Some(m.map_or(w, |m| m.max(w))))
        .ok_or(Error::EmptyNashSet)?;
    if best_nash <= 0.0 {
        return Err(Error::NonPositiveWelfare(best_nash));
    }
    let best = game.admissible_profiles().map(|a| game.welfare(a)).fold(f64::NEG_INFINITY, f64::max);
    Ok(best / best_nash)
}
