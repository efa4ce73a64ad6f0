//! Stage-one channel allocation at the base station.
//!
//! Cellular users are matched to channels by a maximum-weight bipartite
//! matching on `ln(p_c h_bl,q)`. D2D users are then clustered around the
//! cellular users by a minimum-weight partition of the estimated network
//! graph, solved as a matching against `K` replicas of every cellular user.
//! QoS-constrained and fairness-driven clustering are offered as alternatives.

mod clustering;
mod fairness;
mod matching;
mod qos;

pub use clustering::{
    allocation_cost, build_estimated_graph, cluster_by_replicated_matching, cross_cluster_sum,
    qway_partition_bruteforce, ClusterAssignment, EstimatedNetworkGraph, PartitionOracle,
    ORACLE_STATE_LIMIT,
};
pub use fairness::{cluster_loads, fairness_partition, FairnessPartition};
pub use matching::{
    build_cellular_graph, cellular_assignment, hungarian_matching, AssignmentMatrix, BipartiteGraph,
    Matching, Sense,
};
pub use qos::{
    max_tolerable_interference, qos_assignment, qos_assignment_exact, qos_thresholds, QosAssignment,
    QOS_ORACLE_LIMIT,
};

use serde::{Deserialize, Serialize};

/// Stage-one objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    /// Maximize the cellular lower bound (sum utility).
    Sum,
    /// Serve as many D2D users as the cellular QoS floors allow.
    Qos,
    /// Balance the interference load across cellular users.
    Fairness,
}

impl std::str::FromStr for Criterion {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "sum" => Ok(Criterion::Sum),
            "qos" => Ok(Criterion::Qos),
            "fairness" => Ok(Criterion::Fairness),
            other => Err(crate::Error::Config(format!("unknown criterion {other:?}"))),
        }
    }
}

impl std::fmt::Display for Criterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Criterion::Sum => "sum",
            Criterion::Qos => "qos",
            Criterion::Fairness => "fairness",
        })
    }
}
