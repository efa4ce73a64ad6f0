use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::space::ProfileSpace;
use crate::{Error, Result};

/// Finite game in normal form with a dense payoff table.
///
/// Actions carry a numeric label (the transmit power for power games).
/// Optionally only some profiles are admissible; payoffs outside the
/// admissible set are stored but never consulted by the solvers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategicGame {
    actions: Vec<Vec<f64>>,
    space: ProfileSpace,
    /// `payoffs[profile * players + k]`.
    payoffs: Vec<f64>,
    admissible: Option<Vec<bool>>,
}

impl StrategicGame {
    pub fn from_fn<F>(actions: Vec<Vec<f64>>, mut payoff: F) -> Result<Self>
    where
        F: FnMut(&[usize]) -> Result<Vec<f64>>,
    {
        let space = ProfileSpace::new(actions.iter().map(Vec::len).collect())?;
        let n = space.players();
        let mut payoffs = Vec::with_capacity(space.len() * n);
        for idx in 0..space.len() {
            let r = payoff(&space.decode(idx))?;
            if r.len() != n {
                return Err(Error::InvalidGame(format!("payoff vector has {} entries, expected {n}", r.len())));
            }
            if r.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidGame("non-finite payoff".into()));
            }
            payoffs.extend(r);
        }
        Ok(Self { actions, space, payoffs, admissible: None })
    }

    /// Restricts play to the profiles where `admissible` holds.
    pub fn with_admissible(mut self, admissible: Vec<bool>) -> Result<Self> {
        if admissible.len() != self.space.len() {
            return Err(Error::InvalidGame("admissibility mask has the wrong length".into()));
        }
        self.admissible = Some(admissible);
        Ok(self)
    }

    pub fn space(&self) -> &ProfileSpace {
        &self.space
    }

    pub fn players(&self) -> usize {
        self.space.players()
    }

    pub fn actions(&self, player: usize) -> &[f64] {
        &self.actions[player]
    }

    pub fn action_sets(&self) -> &[Vec<f64>] {
        &self.actions
    }

    pub fn profile_count(&self) -> usize {
        self.space.len()
    }

    pub fn payoff(&self, profile: usize, player: usize) -> f64 {
        self.payoffs[profile * self.players() + player]
    }

    pub fn payoffs(&self, profile: usize) -> &[f64] {
        let n = self.players();
        &self.payoffs[profile * n..(profile + 1) * n]
    }

    /// Sum of payoffs.
    pub fn welfare(&self, profile: usize) -> f64 {
        self.payoffs(profile).iter().sum()
    }

    pub fn is_admissible(&self, profile: usize) -> bool {
        self.admissible.as_ref().is_none_or(|m| m[profile])
    }

    pub fn admissible_profiles(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.profile_count()).filter(|&p| self.is_admissible(p))
    }

    /// Action labels of a profile.
    pub fn labels(&self, profile: usize) -> Vec<f64> {
        self.space.decode(profile).iter().enumerate().map(|(k, &a)| self.actions[k][a]).collect()
    }

    /// Index of the profile whose action labels equal `labels`.
    pub fn profile_of_labels(&self, labels: &[f64]) -> Option<usize> {
        if labels.len() != self.players() {
            return None;
        }
        let mut actions = Vec::with_capacity(labels.len());
        for (k, &x) in labels.iter().enumerate() {
            actions.push(self.actions[k].iter().position(|&a| a == x)?);
        }
        Some(self.space.encode(&actions))
    }

    /// Same game with `offset` added to every payoff of `player`.
    pub fn shifted(&self, player: usize, offset: f64) -> Self {
        let mut g = self.clone();
        let n = self.players();
        for p in 0..self.profile_count() {
            g.payoffs[p * n + player] += offset;
        }
        g
    }

    /// Replaces one payoff entry.
    pub fn set_payoff(&mut self, profile: usize, player: usize, value: f64) {
        let n = self.players();
        self.payoffs[profile * n + player] = value;
    }

    /// Reads a payoff table with header `action_1..action_K,reward_1..reward_K`
    /// and one row per joint profile. Action sets are the sorted distinct
    /// labels seen per column; every profile must appear exactly once.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header = rdr.headers()?.clone();
        if header.is_empty() || header.len() % 2 != 0 {
            return Err(Error::PayoffTable("header must hold K action and K reward columns".into()));
        }
        let n = header.len() / 2;
        for k in 0..n {
            if header[k] != format!("action_{}", k + 1) || header[n + k] != format!("reward_{}", k + 1) {
                return Err(Error::PayoffTable(format!(
                    "expected columns action_1..action_{n}, reward_1..reward_{n}"
                )));
            }
        }
        let mut rows: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let parse = |i: usize| -> Result<f64> {
                rec[i].parse::<f64>().map_err(|e| {
                    Error::PayoffTable(format!("row {}: column {}: {e}", line + 1, &header[i]))
                })
            };
            let acts = (0..n).map(&parse).collect::<Result<Vec<_>>>()?;
            let rews = (n..2 * n).map(&parse).collect::<Result<Vec<_>>>()?;
            rows.push((acts, rews));
        }
        let mut actions: Vec<Vec<f64>> = vec![Vec::new(); n];
        for (acts, _) in &rows {
            for (k, &a) in acts.iter().enumerate() {
                if !a.is_finite() {
                    return Err(Error::PayoffTable("non-finite action label".into()));
                }
                if !actions[k].contains(&a) {
                    actions[k].push(a);
                }
            }
        }
        for set in &mut actions {
            set.sort_by(f64::total_cmp);
        }
        let space = ProfileSpace::new(actions.iter().map(Vec::len).collect())?;
        let mut table: Vec<Option<Vec<f64>>> = vec![None; space.len()];
        for (acts, rews) in rows {
            let idx: Vec<usize> = acts
                .iter()
                .enumerate()
                .map(|(k, a)| actions[k].iter().position(|x| x == a).expect("collected above"))
                .collect();
            let slot = &mut table[space.encode(&idx)];
            if slot.is_some() {
                return Err(Error::PayoffTable(format!("duplicate profile {acts:?}")));
            }
            *slot = Some(rews);
        }
        if let Some(missing) = table.iter().position(Option::is_none) {
            return Err(Error::PayoffTable(format!("profile {:?} missing", space.decode(missing))));
        }
        Self::from_fn(actions, |p| Ok(table[space.encode(p)].clone().expect("checked complete")))
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let n = self.players();
        let mut w = csv::Writer::from_writer(writer);
        let mut header: Vec<String> = (1..=n).map(|k| format!("action_{k}")).collect();
        header.extend((1..=n).map(|k| format!("reward_{k}")));
        w.write_record(&header)?;
        for p in 0..self.profile_count() {
            let mut row: Vec<String> = self.labels(p).iter().map(|x| x.to_string()).collect();
            row.extend(self.payoffs(p).iter().map(|x| x.to_string()));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}
