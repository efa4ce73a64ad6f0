use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::LearningTrace;
use crate::game::EquilibriumSet;

/// Trailing trials summarised by [`convergence_stats`].
pub const FINAL_WINDOW: usize = 500;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub window: usize,
    /// `action_frequency[k][a]` over the final window.
    pub action_frequency: Vec<Vec<f64>>,
    /// Running mean of each player's observed reward, one row per trial.
    pub running_mean_reward: Vec<Vec<f64>>,
    pub window_mean_reward: Vec<f64>,
    pub modal_profile: usize,
    pub modal_actions: Vec<usize>,
    pub modal_frequency: f64,
    /// Final-window share of each equilibrium profile.
    pub nash_frequency: BTreeMap<usize, f64>,
    pub nash_share: f64,
}

/// Summarises the last `window` trials of `trace` (the whole trace if shorter).
pub fn convergence_stats(trace: &LearningTrace, nash: &EquilibriumSet, window: usize) -> ConvergenceReport {
    let players = trace.players();
    let w = window.clamp(1, trace.len().max(1)).min(trace.len());
    let tail = &trace.records[trace.len() - w..];
    let denom = w.max(1) as f64;

    let mut action_frequency: Vec<Vec<f64>> = trace.action_labels.iter().map(|a| vec![0.0; a.len()]).collect();
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    let mut window_mean_reward = vec![0.0; players];
    for r in tail {
        for (k, &a) in r.actions.iter().enumerate() {
            action_frequency[k][a] += 1.0;
            window_mean_reward[k] += r.rewards[k];
        }
        *counts.entry(r.profile).or_default() += 1;
    }
    action_frequency.iter_mut().flatten().for_each(|f| *f /= denom);
    window_mean_reward.iter_mut().for_each(|x| *x /= denom);

    let mut sums = vec![0.0; players];
    let running_mean_reward = trace
        .records
        .iter()
        .enumerate()
        .map(|(i, r)| {
            sums.iter_mut().zip(&r.rewards).for_each(|(s, x)| *s += x);
            sums.iter().map(|s| s / (i + 1) as f64).collect()
        })
        .collect();

    // ties go to the smallest profile index
    let (modal_profile, modal_count) =
        counts.iter().fold((0, 0), |best, (&p, &c)| if c > best.1 { (p, c) } else { best });
    let modal_actions = tail.iter().find(|r| r.profile == modal_profile).map(|r| r.actions.clone()).unwrap_or_default();
    let nash_frequency: BTreeMap<usize, f64> = nash
        .profiles
        .iter()
        .map(|&p| (p, counts.get(&p).copied().unwrap_or(0) as f64 / denom))
        .collect();
    let nash_share = nash_frequency.values().sum();

    ConvergenceReport {
        window: w,
        action_frequency,
        running_mean_reward,
        window_mean_reward,
        modal_profile,
        modal_actions,
        modal_frequency: modal_count as f64 / denom,
        nash_frequency,
        nash_share,
    }
}
