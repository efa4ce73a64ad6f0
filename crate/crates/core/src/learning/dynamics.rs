use std::collections::VecDeque;
use std::io::Write;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{learning_rate, LearnerParams, NoiseModel};
use crate::game::{ProfileSpace, StrategicGame};
use crate::Result;

/// Per-player Q-tables over joint profiles plus the shared history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerState {
    /// `q[k][profile]`.
    pub q: Vec<Vec<f64>>,
    pub visits: Vec<u64>,
    /// Most recent profile last.
    pub memory: VecDeque<usize>,
    pub capacity: usize,
    pub last_profile: usize,
}

impl LearnerState {
    pub fn new(space: &ProfileSpace, capacity: usize, first: usize) -> Self {
        Self {
            q: vec![vec![0.0; space.len()]; space.players()],
            visits: vec![0; space.len()],
            memory: VecDeque::with_capacity(capacity),
            capacity,
            last_profile: first,
        }
    }

    pub fn remember(&mut self, profile: usize) {
        if self.memory.len() == self.capacity {
            self.memory.pop_front();
        }
        self.memory.push_back(profile);
        self.last_profile = profile;
    }
}

/// Action distribution of `player` when exploiting: mass `zeta` on the
/// previous action, the rest spread evenly over actions whose mean Q-value
/// against the remembered opponent play strictly beats the previous action.
pub fn better_reply_distribution(player: usize, state: &LearnerState, space: &ProfileSpace, zeta: f64) -> Vec<f64> {
    let n = space.actions(player);
    let last = space.action_of(state.last_profile, player);
    let score = |a: usize| -> f64 {
        let total: f64 = state.memory.iter().map(|&p| state.q[player][space.deviate(p, player, a)]).sum();
        total / state.memory.len().max(1) as f64
    };
    let base = score(last);
    let better: Vec<usize> = (0..n).filter(|&a| a != last && score(a) > base).collect();
    let mut dist = vec![0.0; n];
    if better.is_empty() {
        dist[last] = 1.0;
    } else {
        dist[last] = zeta;
        let share = (1.0 - zeta) / better.len() as f64;
        for a in better {
            dist[a] += share;
        }
    }
    dist
}

/// Moves every player's Q-value of `profile` towards its observed reward
/// and returns the step size used.
pub fn q_update(state: &mut LearnerState, profile: usize, rewards: &[f64], params: &LearnerParams) -> f64 {
    let lambda = learning_rate(params.c_lambda, state.visits[profile], params.rho_lambda);
    for (q, &r) in state.q.iter_mut().zip(rewards) {
        q[profile] += lambda * (r - q[profile]);
    }
    state.visits[profile] += 1;
    lambda
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub t: usize,
    pub profile: usize,
    pub actions: Vec<usize>,
    pub rewards: Vec<f64>,
    pub epsilon: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearningTrace {
    pub action_labels: Vec<Vec<f64>>,
    pub records: Vec<TrialRecord>,
    pub final_state: LearnerState,
}

impl LearningTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn players(&self) -> usize {
        self.action_labels.len()
    }

    /// Columns `t, action_1.., reward_1.., epsilon`; actions by label.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let k = self.players();
        let mut header = vec!["t".to_string()];
        header.extend((1..=k).map(|i| format!("action_{i}")));
        header.extend((1..=k).map(|i| format!("reward_{i}")));
        header.push("epsilon".into());
        w.write_record(&header)?;
        for r in &self.records {
            let mut row = vec![r.t.to_string()];
            row.extend(r.actions.iter().enumerate().map(|(p, &a)| self.action_labels[p][a].to_string()));
            row.extend(r.rewards.iter().map(|x| x.to_string()));
            row.push(r.epsilon.to_string());
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Runs the dynamics from a uniformly random first profile.
pub fn run(game: &StrategicGame, params: &LearnerParams, noise: &NoiseModel, seed: u64) -> Result<LearningTrace> {
    run_from(game, params, noise, seed, None)
}

/// As [`run`], optionally fixing the first trial's profile.
pub fn run_from(
    game: &StrategicGame,
    params: &LearnerParams,
    noise: &NoiseModel,
    seed: u64,
    start: Option<&[usize]>,
) -> Result<LearningTrace> {
    params.validate()?;
    let space = game.space();
    let players = space.players();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(params.horizon);

    let first: Vec<usize> = match start {
        Some(a) => a.to_vec(),
        None => (0..players).map(|k| rng.gen_range(0..space.actions(k))).collect(),
    };
    let mut state = LearnerState::new(space, params.memory, space.encode(&first));

    for t in 1..=params.horizon {
        let epsilon = if t == 1 { 1.0 } else { params.epsilon(t, players) };
        let actions: Vec<usize> = if t == 1 {
            first.clone()
        } else {
            let explore: Vec<bool> = (0..players).map(|_| rng.gen::<f64>() < epsilon).collect();
            (0..players)
                .map(|k| {
                    if explore[k] {
                        rng.gen_range(0..space.actions(k))
                    } else {
                        let dist = better_reply_distribution(k, &state, space, params.zeta);
                        WeightedIndex::new(&dist).expect("distribution has positive mass").sample(&mut rng)
                    }
                })
                .collect()
        };
        let profile = space.encode(&actions);
        let rewards: Vec<f64> = (0..players).map(|k| game.payoff(profile, k) + noise.sample(&mut rng)).collect();
        let lambda = q_update(&mut state, profile, &rewards, params);
        state.remember(profile);
        records.push(TrialRecord { t, profile, actions, rewards, epsilon, lambda });
    }
    Ok(LearningTrace { action_labels: game.action_sets().to_vec(), records, final_state: state })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bandit() -> StrategicGame {
        StrategicGame::from_fn(vec![vec![0.0, 1.0]], |a| Ok(vec![[0.3, 0.8][a[0]]])).unwrap()
    }

    #[test]
    fn equal_q_keeps_last_action() {
        let g = StrategicGame::from_fn(vec![vec![0.0, 1.0, 2.0]; 2], |_| Ok(vec![0.0, 0.0])).unwrap();
        let mut st = LearnerState::new(g.space(), 4, 1);
        st.remember(1);
        assert_eq!(better_reply_distribution(0, &st, g.space(), 0.3), vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn better_replies_get_uniform_mass() {
        let g = StrategicGame::from_fn(vec![vec![0.0, 1.0, 2.0]], |_| Ok(vec![0.0])).unwrap();
        let mut st = LearnerState::new(g.space(), 4, 0);
        st.remember(0);
        st.q[0] = vec![0.0, 1.0, 2.0];
        assert_eq!(better_reply_distribution(0, &st, g.space(), 0.0), vec![0.0, 0.5, 0.5]);
        st.q[0] = vec![1.0, 2.0, -1.0];
        assert_eq!(better_reply_distribution(0, &st, g.space(), 0.0), vec![0.0, 1.0, 0.0]);
        assert_eq!(better_reply_distribution(0, &st, g.space(), 0.25), vec![0.25, 0.75, 0.0]);
    }

    #[test]
    fn update_touches_one_profile() {
        let g = bandit();
        let params = LearnerParams { c_lambda: 1.0, rho_lambda: 1.0, ..Default::default() };
        let mut st = LearnerState::new(g.space(), 3, 0);
        let lambda = q_update(&mut st, 1, &[1.0], &params);
        assert_eq!(lambda, 1.0);
        assert_eq!(st.q[0], vec![0.0, 1.0]);
        st.q[0][1] = 2.0;
        st.visits[1] = 3; // (1 + 3)^-0.5 under rho 0.5
        let params = LearnerParams { rho_lambda: 0.5, ..params };
        q_update(&mut st, 1, &[0.0], &params);
        assert!((st.q[0][1] - 1.0).abs() < 1e-12);
        assert_eq!(st.q[0][0], 0.0);
        assert_eq!(st.visits, vec![0, 4]);
    }

    #[test]
    fn bandit_settles_on_argmax() {
        let trace = run(&bandit(), &LearnerParams::default(), &NoiseModel::new(0.0).unwrap(), 5).unwrap();
        let tail = &trace.records[trace.len() - 200..];
        let best = tail.iter().filter(|r| r.actions[0] == 1).count();
        assert!(best > 150, "{best}");
    }

    #[test]
    fn deterministic_per_seed() {
        let g = StrategicGame::from_fn(vec![vec![2.0, 4.0]; 2], |a| Ok(vec![a[0] as f64, a[1] as f64])).unwrap();
        let p = LearnerParams { horizon: 300, ..Default::default() };
        let a = run(&g, &p, &NoiseModel::default(), 9).unwrap();
        let b = run(&g, &p, &NoiseModel::default(), 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 300);
        let mut buf = Vec::new();
        a.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,action_1,action_2,reward_1,reward_2,epsilon\n1,"));
    }
}
