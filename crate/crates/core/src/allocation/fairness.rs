//! Min-max interference balancing across cellular users.

use serde::{Deserialize, Serialize};

use super::clustering::{cluster_by_replicated_matching, ClusterAssignment, EstimatedNetworkGraph};
use crate::Result;

/// Instances with at most this many `L^K` placements are solved exactly.
const EXACT_LIMIT: u128 = 1_000_000;
const EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FairnessPartition {
    /// Cluster `l` holds cellular user `l`.
    pub assignment: ClusterAssignment,
    pub loads: Vec<f64>,
    pub max_load: f64,
}

/// Interference load `sum_{k in K_q} w_kl` of every cluster in a
/// one-cellular-per-cluster assignment.
pub fn cluster_loads(assignment: &ClusterAssignment, graph: &EstimatedNetworkGraph) -> Vec<f64> {
    (0..assignment.clusters())
        .map(|q| {
            assignment
                .cellular_in(q)
                .into_iter()
                .map(|l| assignment.d2d_in(q).into_iter().fold(0.0, |acc, k| acc + graph.weight(k, l)))
                .fold(0.0, |acc, x| acc + x)
        })
        .collect()
}

#[derive(Clone)]
struct Placement {
    host: Vec<usize>,
    loads: Vec<f64>,
}

impl Placement {
    fn new(graph: &EstimatedNetworkGraph, host: Vec<usize>) -> Self {
        let mut loads = vec![0.0; graph.cellular_count()];
        for (k, &l) in host.iter().enumerate() {
            loads[l] += graph.weight(k, l);
        }
        Self { host, loads }
    }

    /// (max load, total load), compared lexicographically.
    fn key(&self) -> (f64, f64) {
        (self.loads.iter().copied().fold(0.0, f64::max), self.loads.iter().sum())
    }
}

fn better(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 < b.0 - EPS || (a.0 <= b.0 + EPS && a.1 < b.1 - EPS)
}

/// Relocations and pairwise swaps until no move improves (max, total).
fn local_search(graph: &EstimatedNetworkGraph, mut p: Placement) -> Placement {
    let k_n = p.host.len();
    let l_n = graph.cellular_count();
    loop {
        let mut improved = false;
        for k in 0..k_n {
            for l in 0..l_n {
                if l == p.host[k] {
                    continue;
                }
                let mut cand = p.host.clone();
                cand[k] = l;
                let c = Placement::new(graph, cand);
                if better(c.key(), p.key()) {
                    p = c;
                    improved = true;
                }
            }
        }
        for a in 0..k_n {
            for b in (a + 1)..k_n {
                if p.host[a] == p.host[b] {
                    continue;
                }
                let mut cand = p.host.clone();
                cand.swap(a, b);
                let c = Placement::new(graph, cand);
                if better(c.key(), p.key()) {
                    p = c;
                    improved = true;
                }
            }
        }
        if !improved {
            return p;
        }
    }
}

/// Users by descending heaviest weight, each sent to the host that keeps the
/// running maximum lowest.
fn greedy(graph: &EstimatedNetworkGraph) -> Placement {
    let k_n = graph.d2d_count();
    let l_n = graph.cellular_count();
    let heaviest = |k: usize| (0..l_n).map(|l| graph.weight(k, l)).fold(0.0, f64::max);
    let mut order: Vec<usize> = (0..k_n).collect();
    order.sort_by(|&a, &b| heaviest(b).total_cmp(&heaviest(a)).then(a.cmp(&b)));
    let mut loads = vec![0.0; l_n];
    let mut host = vec![0; k_n];
    for k in order {
        let mut best: Option<(usize, (f64, f64))> = None;
        for l in 0..l_n {
            let after = loads[l] + graph.weight(k, l);
            let peak = loads.iter().enumerate().map(|(i, &x)| if i == l { after } else { x }).fold(0.0, f64::max);
            let key = (peak, after);
            if best.is_none_or(|(_, b)| better(key, b)) {
                best = Some((l, key));
            }
        }
        let l = best.expect("at least one cellular user").0;
        loads[l] += graph.weight(k, l);
        host[k] = l;
    }
    Placement::new(graph, host)
}

/// Depth-first search over all `L^K` placements with max/total pruning.
fn exact(graph: &EstimatedNetworkGraph, incumbent: Placement) -> Placement {
    struct Dfs<'a> {
        graph: &'a EstimatedNetworkGraph,
        host: Vec<usize>,
        loads: Vec<f64>,
        best: Placement,
    }
    impl Dfs<'_> {
        fn go(&mut self, k: usize) {
            let peak = self.loads.iter().copied().fold(0.0, f64::max);
            let total: f64 = self.loads.iter().sum();
            let (bp, bt) = self.best.key();
            if peak > bp + EPS || (peak >= bp - EPS && total >= bt - EPS) {
                return;
            }
            if k == self.host.len() {
                self.best = Placement::new(self.graph, self.host.clone());
                return;
            }
            for l in 0..self.graph.cellular_count() {
                let w = self.graph.weight(k, l);
                self.loads[l] += w;
                self.host[k] = l;
                self.go(k + 1);
                self.loads[l] -= w;
            }
        }
    }
    let mut dfs = Dfs {
        graph,
        host: vec![0; graph.d2d_count()],
        loads: vec![0.0; graph.cellular_count()],
        best: incumbent,
    };
    dfs.go(0);
    dfs.best
}

/// Balanced clustering: each cellular user anchors its own cluster and the
/// D2D users are spread to minimize the largest cluster load, ties broken by
/// the total load.
///
/// Candidates are the sum-minimizing clustering, a greedy balance, both
/// polished by local search, and an exact search when `L^K` is small.
pub fn fairness_partition(graph: &EstimatedNetworkGraph) -> Result<FairnessPartition> {
    let l_n = graph.cellular_count();
    let k_n = graph.d2d_count();
    let sum_min = cluster_by_replicated_matching(graph)?;
    let seed = Placement::new(graph, (0..k_n).map(|k| sum_min.cluster_of_d2d(k)).collect());
    let mut best = local_search(graph, seed);
    let g = local_search(graph, greedy(graph));
    if better(g.key(), best.key()) {
        best = g;
    }
    let space = (l_n as u128).checked_pow(k_n as u32).unwrap_or(u128::MAX);
    if space <= EXACT_LIMIT {
        best = exact(graph, best);
    }
    let assignment = ClusterAssignment::around_cellular(l_n, &best.host)?;
    let loads = cluster_loads(&assignment, graph);
    let max_load = loads.iter().copied().fold(0.0, f64::max);
    Ok(FairnessPartition { assignment, loads, max_load })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_weights_balance_sizes() {
        let g = EstimatedNetworkGraph::from_weights(3, &vec![vec![0.2; 3]; 6], 1.0).unwrap();
        let f = fairness_partition(&g).unwrap();
        for q in 0..3 {
            assert_eq!(f.assignment.d2d_in(q).len(), 2);
        }
        assert!(f.loads.iter().all(|&x| (x - 0.4).abs() < 1e-12));
    }

    #[test]
    fn two_by_two_matches_enumeration() {
        let w = [[0.4, 0.1], [0.4, 0.1]];
        let g = EstimatedNetworkGraph::from_weights(2, &[w[0].to_vec(), w[1].to_vec()], 1.0).unwrap();
        // all four placements: (0,0) -> 0.8, (0,1)/(1,0) -> 0.4, (1,1) -> 0.2
        let mut best = f64::INFINITY;
        for a in 0..2 {
            for b in 0..2 {
                let mut loads = [0.0; 2];
                loads[a] += w[0][a];
                loads[b] += w[1][b];
                best = best.min(loads[0].max(loads[1]));
            }
        }
        let f = fairness_partition(&g).unwrap();
        assert!((f.max_load - best).abs() < 1e-12);
        assert!((f.max_load - 0.2).abs() < 1e-12);
        assert_eq!(f.assignment.d2d_in(1), vec![0, 1]);
    }

    #[test]
    fn spreading_when_stacking_hurts() {
        let g = EstimatedNetworkGraph::from_weights(2, &[vec![0.4, 0.5], vec![0.4, 0.5]], 1.0).unwrap();
        let f = fairness_partition(&g).unwrap();
        assert_eq!(f.assignment.d2d_in(0).len(), 1);
        assert_eq!(f.assignment.d2d_in(1).len(), 1);
        assert!((f.max_load - 0.5).abs() < 1e-12);
    }

    #[test]
    fn large_instance_uses_heuristics() {
        let weights: Vec<Vec<f64>> =
            (0..12).map(|k| (0..5).map(|l| ((k * 7 + l * 3) % 11) as f64 / 11.0).collect()).collect();
        let g = EstimatedNetworkGraph::from_weights(5, &weights, 1.0).unwrap();
        let f = fairness_partition(&g).unwrap();
        assert!(f.assignment.one_cellular_per_cluster());
        let sum_min = cluster_by_replicated_matching(&g).unwrap();
        let sum_loads = cluster_loads(&sum_min, &g);
        assert!(f.max_load <= sum_loads.iter().copied().fold(0.0, f64::max) + 1e-12);
    }
}
