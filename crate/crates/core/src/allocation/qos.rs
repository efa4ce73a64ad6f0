//! D2D admission under per-cellular interference budgets.
//!
//! Maximizing the number of admitted D2D users subject to
//! `sum_k w_kl x_kl <= I_l,max` is a generalized assignment problem. The
//! production path is a slack-greedy construction plus one improvement pass;
//! [`qos_assignment_exact`] is a branch-and-bound oracle for small instances.

use serde::{Deserialize, Serialize};

use super::clustering::EstimatedNetworkGraph;
use crate::network::Scenario;
use crate::{Error, Result};

/// Largest `K * L` accepted by the exact oracle.
pub const QOS_ORACLE_LIMIT: usize = 30;

/// Interference budget `I_max = p_c h_bl,q / exp(R_min) - 1` of cellular user
/// `l` on channel `q`.
pub fn max_tolerable_interference(scenario: &Scenario, l: usize, q: usize, r_min: f64) -> Result<f64> {
    let signal = scenario.power.bs_power * scenario.bs_to_cellular(l, q);
    tolerable_from_signal(signal, r_min).ok_or(Error::QosInfeasible(l))
}

pub(crate) fn tolerable_from_signal(signal: f64, r_min: f64) -> Option<f64> {
    let i_max = signal / r_min.exp() - 1.0;
    // R_min = ln(signal) lands here up to rounding
    if i_max >= -1e-12 {
        Some(i_max.max(0.0))
    } else {
        None
    }
}

/// Budgets for every cellular user given its channel.
pub fn qos_thresholds(scenario: &Scenario, cellular_channel: &[usize], r_min: &[f64]) -> Result<Vec<f64>> {
    if r_min.len() != cellular_channel.len() {
        return Err(Error::Config(format!(
            "{} QoS floors for {} cellular users",
            r_min.len(),
            cellular_channel.len()
        )));
    }
    cellular_channel
        .iter()
        .zip(r_min)
        .enumerate()
        .map(|(l, (&q, &r))| max_tolerable_interference(scenario, l, q, r))
        .collect()
}

/// Binary `K x L` admission matrix stored as one optional cellular host per D2D user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QosAssignment {
    pub host: Vec<Option<usize>>,
}

impl QosAssignment {
    pub fn served(&self) -> usize {
        self.host.iter().flatten().count()
    }

    /// `x_kl`.
    pub fn x(&self, k: usize, l: usize) -> bool {
        self.host[k] == Some(l)
    }

    /// Interference load of every cellular user, summed in D2D index order.
    pub fn loads(&self, graph: &EstimatedNetworkGraph) -> Vec<f64> {
        let mut loads = vec![0.0; graph.cellular_count()];
        for (k, h) in self.host.iter().enumerate() {
            if let Some(l) = *h {
                loads[l] += graph.weight(k, l);
            }
        }
        loads
    }

    pub fn is_feasible(&self, graph: &EstimatedNetworkGraph, i_max: &[f64]) -> bool {
        self.loads(graph).iter().zip(i_max).all(|(load, cap)| load <= cap)
    }
}

fn validate(graph: &EstimatedNetworkGraph, i_max: &[f64]) -> Result<()> {
    if i_max.len() != graph.cellular_count() {
        return Err(Error::Config(format!(
            "{} interference budgets for {} cellular users",
            i_max.len(),
            graph.cellular_count()
        )));
    }
    if i_max.iter().any(|&i| !(i >= 0.0)) {
        return Err(Error::Config("interference budgets must be >= 0".into()));
    }
    Ok(())
}

struct Packing<'a> {
    graph: &'a EstimatedNetworkGraph,
    i_max: &'a [f64],
    host: Vec<Option<usize>>,
}

impl Packing<'_> {
    fn load(&self, l: usize) -> f64 {
        self.host
            .iter()
            .enumerate()
            .filter(|(_, h)| **h == Some(l))
            .map(|(k, _)| self.graph.weight(k, l))
            .sum()
    }

    fn fits(&self, k: usize, l: usize) -> bool {
        self.load(l) + self.graph.weight(k, l) <= self.i_max[l]
    }

    fn slack(&self, l: usize) -> f64 {
        self.i_max[l] - self.load(l)
    }

    /// Host with the most remaining slack among those that fit `k`.
    fn roomiest_host(&self, k: usize) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for l in 0..self.graph.cellular_count() {
            if self.fits(k, l) {
                let s = self.slack(l);
                if best.is_none_or(|(_, b)| s > b) {
                    best = Some((l, s));
                }
            }
        }
        best.map(|(l, _)| l)
    }

    fn try_insert(&mut self, k: usize) -> bool {
        match self.roomiest_host(k) {
            Some(l) => {
                self.host[k] = Some(l);
                true
            }
            None => false,
        }
    }

    /// Admits unserved `u` by relocating one admitted user, or by exchanging
    /// the hosts of two admitted users.
    fn try_repair(&mut self, u: usize) -> bool {
        if self.try_insert(u) {
            return true;
        }
        let k_n = self.host.len();
        let l_n = self.graph.cellular_count();
        for a in 0..k_n {
            let Some(la) = self.host[a] else { continue };
            for lb in (0..l_n).filter(|&l| l != la) {
                self.host[a] = None;
                if self.fits(a, lb) {
                    self.host[a] = Some(lb);
                    if self.try_insert(u) {
                        return true;
                    }
                }
                self.host[a] = Some(la);
            }
        }
        for a in 0..k_n {
            for b in (a + 1)..k_n {
                let (Some(la), Some(lb)) = (self.host[a], self.host[b]) else { continue };
                if la == lb {
                    continue;
                }
                self.host[a] = None;
                self.host[b] = None;
                let swap_ok = self.fits(a, lb) && {
                    self.host[a] = Some(lb);
                    let ok = self.fits(b, la);
                    self.host[a] = None;
                    ok
                };
                if swap_ok {
                    self.host[a] = Some(lb);
                    self.host[b] = Some(la);
                    if self.try_insert(u) {
                        return true;
                    }
                }
                self.host[a] = Some(la);
                self.host[b] = Some(lb);
            }
        }
        false
    }

    fn improve(&mut self) {
        for u in 0..self.host.len() {
            if self.host[u].is_none() {
                self.try_repair(u);
            }
        }
    }
}

fn min_weight(graph: &EstimatedNetworkGraph, k: usize) -> f64 {
    (0..graph.cellular_count()).map(|l| graph.weight(k, l)).fold(f64::INFINITY, f64::min)
}

fn pack<'a>(graph: &'a EstimatedNetworkGraph, i_max: &'a [f64], order: &[usize]) -> Packing<'a> {
    let mut p = Packing { graph, i_max, host: vec![None; graph.d2d_count()] };
    for &k in order {
        p.try_insert(k);
    }
    p.improve();
    p
}

/// Heuristic admission: users sorted by their smallest weight, each placed on
/// the feasible host with the most slack, followed by one relocation/swap
/// pass. The plain index-order construction is also tried and the larger
/// admission kept.
pub fn qos_assignment(graph: &EstimatedNetworkGraph, i_max: &[f64]) -> Result<QosAssignment> {
    validate(graph, i_max)?;
    let mut by_weight: Vec<usize> = (0..graph.d2d_count()).collect();
    by_weight.sort_by(|&a, &b| min_weight(graph, a).total_cmp(&min_weight(graph, b)).then(a.cmp(&b)));
    let index_order: Vec<usize> = (0..graph.d2d_count()).collect();
    let primary = QosAssignment { host: pack(graph, i_max, &by_weight).host };
    let fallback = QosAssignment { host: pack(graph, i_max, &index_order).host };
    let best = if fallback.served() > primary.served() { fallback } else { primary };
    debug_assert!(best.is_feasible(graph, i_max));
    Ok(best)
}

/// Exact maximum admission by depth-first branch and bound.
pub fn qos_assignment_exact(graph: &EstimatedNetworkGraph, i_max: &[f64]) -> Result<QosAssignment> {
    validate(graph, i_max)?;
    let size = graph.d2d_count() * graph.cellular_count();
    if size > QOS_ORACLE_LIMIT {
        return Err(Error::OracleScaleExceeded(size as u128, QOS_ORACLE_LIMIT as u128));
    }
    let mut order: Vec<usize> = (0..graph.d2d_count()).collect();
    order.sort_by(|&a, &b| min_weight(graph, a).total_cmp(&min_weight(graph, b)).then(a.cmp(&b)));

    struct Search<'a> {
        graph: &'a EstimatedNetworkGraph,
        i_max: &'a [f64],
        order: Vec<usize>,
        loads: Vec<f64>,
        host: Vec<Option<usize>>,
        best: Vec<Option<usize>>,
        best_count: usize,
    }

    impl Search<'_> {
        fn go(&mut self, depth: usize, count: usize) {
            if count > self.best_count {
                self.best_count = count;
                self.best.clone_from(&self.host);
            }
            if depth == self.order.len() || count + (self.order.len() - depth) <= self.best_count {
                return;
            }
            let k = self.order[depth];
            for l in 0..self.graph.cellular_count() {
                let w = self.graph.weight(k, l);
                if self.loads[l] + w <= self.i_max[l] {
                    let saved = self.loads[l];
                    self.loads[l] += w;
                    self.host[k] = Some(l);
                    self.go(depth + 1, count + 1);
                    self.host[k] = None;
                    self.loads[l] = saved;
                }
            }
            self.go(depth + 1, count);
        }
    }

    let k_n = graph.d2d_count();
    let mut s = Search {
        graph,
        i_max,
        order,
        loads: vec![0.0; graph.cellular_count()],
        host: vec![None; k_n],
        best: vec![None; k_n],
        best_count: 0,
    };
    s.go(0, 0);
    Ok(QosAssignment { host: s.best })
}
