use serde::{Deserialize, Serialize};

use super::matching::{hungarian_matching, BipartiteGraph, Sense};
use crate::network::{ChannelAllocation, Scenario};
use crate::{Error, Result};

/// Largest state space the exhaustive oracles will enumerate.
pub const ORACLE_STATE_LIMIT: u128 = 10_000_000;

/// Interference graph the BS can build from geometry alone.
///
/// D2D-cellular edges weigh `p_d^(M) g_kl`, cellular-cellular edges weigh the
/// penalty `C`, D2D-D2D edges weigh zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatedNetworkGraph {
    d2d_count: usize,
    cellular_count: usize,
    /// Row-major `K x L`.
    weights: Vec<f64>,
    cellular_weight: f64,
    top_power: f64,
}

impl EstimatedNetworkGraph {
    /// `weights[k][l]` are D2D-to-cellular weights bounded by `top_power`.
    /// The cellular penalty defaults to `K * top_power + 1`.
    pub fn from_weights(cellular_count: usize, weights: &[Vec<f64>], top_power: f64) -> Result<Self> {
        if cellular_count == 0 {
            return Err(Error::InvalidScenario("estimated graph needs a cellular user".into()));
        }
        if !(top_power > 0.0) {
            return Err(Error::InvalidScenario(format!("top power {top_power} must be positive")));
        }
        if weights.iter().any(|row| row.len() != cellular_count) {
            return Err(Error::InvalidScenario("D2D weight rows must have L entries".into()));
        }
        if weights.iter().flatten().any(|&w| !(0.0..=top_power).contains(&w)) {
            return Err(Error::InvalidScenario("D2D weights must lie in [0, p_d^(M)]".into()));
        }
        let k = weights.len();
        Ok(Self {
            d2d_count: k,
            cellular_count,
            weights: weights.iter().flatten().copied().collect(),
            cellular_weight: k as f64 * top_power + 1.0,
            top_power,
        })
    }

    /// Overrides `C`; it must stay above `K p_d^(M)`.
    pub fn with_cellular_weight(mut self, c: f64) -> Result<Self> {
        if !(c > self.d2d_count as f64 * self.top_power) {
            return Err(Error::InvalidScenario(format!(
                "cellular weight {c} must exceed K p_d^(M) = {}",
                self.d2d_count as f64 * self.top_power
            )));
        }
        self.cellular_weight = c;
        Ok(self)
    }

    pub fn d2d_count(&self) -> usize {
        self.d2d_count
    }

    pub fn cellular_count(&self) -> usize {
        self.cellular_count
    }

    pub fn cellular_weight(&self) -> f64 {
        self.cellular_weight
    }

    pub fn top_power(&self) -> f64 {
        self.top_power
    }

    /// `w_kl`.
    pub fn weight(&self, k: usize, l: usize) -> f64 {
        self.weights[k * self.cellular_count + l]
    }

    /// Full symmetric `(L+K) x (L+K)` weight matrix, cellular vertices first.
    pub fn full_matrix(&self) -> Vec<Vec<f64>> {
        let (l_n, k_n) = (self.cellular_count, self.d2d_count);
        let n = l_n + k_n;
        let mut m = vec![vec![0.0; n]; n];
        for a in 0..l_n {
            for b in 0..l_n {
                if a != b {
                    m[a][b] = self.cellular_weight;
                }
            }
        }
        for k in 0..k_n {
            for l in 0..l_n {
                m[l_n + k][l] = self.weight(k, l);
                m[l][l_n + k] = self.weight(k, l);
            }
        }
        m
    }
}

/// Builds the estimated network graph from the scenario's path-loss map.
pub fn build_estimated_graph(scenario: &Scenario) -> Result<EstimatedNetworkGraph> {
    let top = scenario.power.max_level();
    let weights: Vec<Vec<f64>> = (0..scenario.d2d_count())
        .map(|k| {
            (0..scenario.cellular_count()).map(|l| top * scenario.d2d_to_cellular_pathloss(k, l)).collect()
        })
        .collect();
    EstimatedNetworkGraph::from_weights(scenario.cellular_count(), &weights, top)
}

/// Partition of the `L + K` users into `Q` clusters (the `B` matrix).
///
/// Users are indexed cellular first, then D2D.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterAssignment {
    cellular_count: usize,
    d2d_count: usize,
    clusters: usize,
    cluster_of: Vec<usize>,
}

impl ClusterAssignment {
    pub fn new(cellular_count: usize, clusters: usize, cluster_of: Vec<usize>) -> Result<Self> {
        if cluster_of.len() < cellular_count {
            return Err(Error::IncompleteAllocation("cluster vector shorter than L".into()));
        }
        if let Some(&bad) = cluster_of.iter().find(|&&q| q >= clusters) {
            return Err(Error::IncompleteAllocation(format!("cluster {bad} out of range")));
        }
        Ok(Self { cellular_count, d2d_count: cluster_of.len() - cellular_count, clusters, cluster_of })
    }

    /// Cellular user `l` alone in cluster `l`, D2D users placed by `d2d_cluster`.
    pub fn around_cellular(cellular_count: usize, d2d_cluster: &[usize]) -> Result<Self> {
        let mut v: Vec<usize> = (0..cellular_count).collect();
        v.extend_from_slice(d2d_cluster);
        Self::new(cellular_count, cellular_count, v)
    }

    pub fn clusters(&self) -> usize {
        self.clusters
    }

    pub fn cellular_count(&self) -> usize {
        self.cellular_count
    }

    pub fn d2d_count(&self) -> usize {
        self.d2d_count
    }

    pub fn cluster_of_cellular(&self, l: usize) -> usize {
        self.cluster_of[l]
    }

    pub fn cluster_of_d2d(&self, k: usize) -> usize {
        self.cluster_of[self.cellular_count + k]
    }

    /// `b_jq`.
    pub fn b(&self, j: usize, q: usize) -> bool {
        self.cluster_of[j] == q
    }

    pub fn matrix(&self) -> Vec<Vec<u8>> {
        self.cluster_of
            .iter()
            .map(|&c| (0..self.clusters).map(|q| u8::from(q == c)).collect())
            .collect()
    }

    pub fn cellular_in(&self, q: usize) -> Vec<usize> {
        (0..self.cellular_count).filter(|&l| self.cluster_of[l] == q).collect()
    }

    pub fn d2d_in(&self, q: usize) -> Vec<usize> {
        (0..self.d2d_count).filter(|&k| self.cluster_of_d2d(k) == q).collect()
    }

    pub fn one_cellular_per_cluster(&self) -> bool {
        (0..self.clusters).all(|q| self.cellular_in(q).len() == 1)
    }

    /// Maps cluster `q` onto channel `cluster_channel[q]`.
    pub fn to_channel_allocation(&self, cluster_channel: &[usize]) -> ChannelAllocation {
        ChannelAllocation::new(
            (0..self.cellular_count).map(|l| cluster_channel[self.cluster_of[l]]).collect(),
            (0..self.d2d_count).map(|k| cluster_channel[self.cluster_of_d2d(k)]).collect(),
        )
    }
}

/// Minimum-weight Q-way partition solved as a min-weight matching of the D2D
/// users against `K` copies of every cellular user. Cluster `l` holds
/// cellular user `l`.
pub fn cluster_by_replicated_matching(graph: &EstimatedNetworkGraph) -> Result<ClusterAssignment> {
    let (l_n, k_n) = (graph.cellular_count, graph.d2d_count);
    if k_n == 0 {
        return ClusterAssignment::around_cellular(l_n, &[]);
    }
    // column `copy * L + l` is the `copy`-th replica of cellular user `l`
    let rows: Vec<Vec<f64>> =
        (0..k_n).map(|k| (0..k_n * l_n).map(|c| graph.weight(k, c % l_n)).collect()).collect();
    let matching = hungarian_matching(&BipartiteGraph::from_rows(&rows)?, Sense::Min)?;
    let d2d: Vec<usize> = matching.row_to_col.iter().map(|&c| c % l_n).collect();
    ClusterAssignment::around_cellular(l_n, &d2d)
}

/// Quadratic-form cost `1/2 sum_q B_q^T W_E B_q`.
pub fn allocation_cost(assignment: &ClusterAssignment, graph: &EstimatedNetworkGraph) -> f64 {
    let w = graph.full_matrix();
    let n = w.len();
    assert_eq!(assignment.cluster_of.len(), n, "assignment and graph sizes differ");
    let mut cost = 0.0;
    for q in 0..assignment.clusters {
        let members: Vec<usize> = (0..n).filter(|&j| assignment.b(j, q)).collect();
        for &a in &members {
            for &b in &members {
                cost += w[a][b];
            }
        }
    }
    let cost = cost / 2.0;
    debug_assert!(
        !assignment.one_cellular_per_cluster()
            || (cost - cross_cluster_sum(assignment, graph)).abs() <= 1e-9 * (1.0 + cost.abs()),
        "quadratic form and cross sum disagree"
    );
    cost
}

/// `sum_q sum_{l in L_q} sum_{k in K_q} w_kl`.
pub fn cross_cluster_sum(assignment: &ClusterAssignment, graph: &EstimatedNetworkGraph) -> f64 {
    let mut total = 0.0;
    for q in 0..assignment.clusters {
        for l in assignment.cellular_in(q) {
            for k in assignment.d2d_in(q) {
                total += graph.weight(k, l);
            }
        }
    }
    total
}

/// Result of the exhaustive partition oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionOracle {
    /// Lexicographically first optimal assignment.
    pub assignment: ClusterAssignment,
    pub cost: f64,
    /// Number of labelled assignments attaining the optimum.
    pub optima: usize,
    /// Whether every optimum puts exactly one cellular user in each cluster.
    pub all_optima_one_cellular: bool,
}

/// Enumerates all `Q^(L+K)` labelled partitions with `Q = L`.
pub fn qway_partition_bruteforce(graph: &EstimatedNetworkGraph) -> Result<PartitionOracle> {
    let q = graph.cellular_count;
    let n = graph.cellular_count + graph.d2d_count;
    let states = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if states > ORACLE_STATE_LIMIT {
        return Err(Error::OracleScaleExceeded(states, ORACLE_STATE_LIMIT));
    }
    let w = graph.full_matrix();
    let cost_of = |labels: &[usize]| -> f64 {
        let mut c = 0.0;
        for a in 0..n {
            for b in (a + 1)..n {
                if labels[a] == labels[b] {
                    c += w[a][b];
                }
            }
        }
        c
    };

    let mut labels = vec![0usize; n];
    let mut best_cost = f64::INFINITY;
    let mut best = labels.clone();
    let mut optima = 0usize;
    let mut all_one = true;
    loop {
        let c = cost_of(&labels);
        let tol = 1e-9 * (1.0 + c.abs());
        if c < best_cost - tol {
            best_cost = c;
            best.clone_from(&labels);
            optima = 1;
            all_one = one_cellular(&labels, q);
        } else if c <= best_cost + tol {
            optima += 1;
            all_one &= one_cellular(&labels, q);
        }
        // odometer, last position fastest
        let mut i = n;
        while i > 0 {
            i -= 1;
            labels[i] += 1;
            if labels[i] < q {
                break;
            }
            labels[i] = 0;
        }
        if labels.iter().all(|&x| x == 0) {
            break;
        }
    }
    Ok(PartitionOracle {
        assignment: ClusterAssignment::new(q, q, best)?,
        cost: best_cost,
        optima,
        all_optima_one_cellular: all_one,
    })
}

fn one_cellular(labels: &[usize], q: usize) -> bool {
    let mut seen = vec![0usize; q];
    for &c in &labels[..q] {
        seen[c] += 1;
    }
    seen.iter().all(|&s| s == 1)
}
