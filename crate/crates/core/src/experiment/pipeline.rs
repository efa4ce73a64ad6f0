use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::allocation::{
    allocation_cost, build_estimated_graph, cellular_assignment, cluster_by_replicated_matching, cluster_loads,
    fairness_partition, qos_assignment, qos_thresholds, Criterion,
};
use crate::game::{enumerate_nash, ClusterModel};
use crate::learning::{convergence_stats, run, LearnerParams, LearningTrace, NoiseModel, FINAL_WINDOW};
use crate::network::{served_utility, ChannelAllocation, Scenario, UtilityBreakdown};
use crate::Result;

/// Stage-one result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllocationOutcome {
    pub criterion: Criterion,
    pub allocation: ChannelAllocation,
    /// `sum_l ln(p_c h_bl,q)` of the cellular matching.
    pub matching_weight: f64,
    /// Estimated interference load per cellular user.
    pub loads: Vec<f64>,
    pub served: usize,
    /// Tolerable interference per cellular user (QoS criterion only).
    pub thresholds: Option<Vec<f64>>,
}

/// Runs stage one for `criterion`; `r_min` is only read by the QoS criterion.
pub fn allocate(scenario: &Scenario, criterion: Criterion, r_min: &[f64]) -> Result<AllocationOutcome> {
    let matching = cellular_assignment(scenario)?;
    let cellular_channel = matching.row_to_col.clone();
    let graph = build_estimated_graph(scenario)?;
    let (d2d_channel, loads, thresholds) = match criterion {
        Criterion::Sum => {
            let b = cluster_by_replicated_matching(&graph)?;
            let loads = cluster_loads(&b, &graph);
            debug_assert!(allocation_cost(&b, &graph).is_finite());
            ((0..graph.d2d_count()).map(|k| Some(cellular_channel[b.cluster_of_d2d(k)])).collect(), loads, None)
        }
        Criterion::Fairness => {
            let f = fairness_partition(&graph)?;
            let ch = (0..graph.d2d_count()).map(|k| Some(cellular_channel[f.assignment.cluster_of_d2d(k)])).collect();
            (ch, f.loads, None)
        }
        Criterion::Qos => {
            let i_max = qos_thresholds(scenario, &cellular_channel, r_min)?;
            let x = qos_assignment(&graph, &i_max)?;
            let ch = x.host.iter().map(|h| h.map(|l| cellular_channel[l])).collect();
            (ch, x.loads(&graph), Some(i_max))
        }
    };
    let allocation = ChannelAllocation { cellular_channel, d2d_channel };
    allocation.validate(scenario)?;
    let served = allocation.d2d_channel.iter().flatten().count();
    Ok(AllocationOutcome { criterion, allocation, matching_weight: matching.total, loads, served, thresholds })
}

/// Stage-two knobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub criterion: Criterion,
    pub learner: LearnerParams,
    pub noise: NoiseModel,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self { criterion: Criterion::Sum, learner: LearnerParams::default(), noise: NoiseModel::default() }
    }
}

/// Learning outcome on one channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterOutcome {
    pub channel: usize,
    pub members: Vec<usize>,
    pub seed: u64,
    /// Final-window modal power per member.
    pub powers: Vec<f64>,
    pub modal_frequency: f64,
    pub nash_share: f64,
    /// Final-window mean observed reward per member.
    pub window_mean_reward: Vec<f64>,
    #[serde(skip)]
    pub trace: Option<LearningTrace>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineResult {
    pub stage_one: AllocationOutcome,
    pub clusters: Vec<ClusterOutcome>,
    /// Transmit power per D2D user; unserved users are listed at the lowest level but stay silent.
    pub powers: Vec<f64>,
    pub utility: UtilityBreakdown,
}

/// Seed of the learning run on channel `q`.
pub fn cluster_seed(seed: u64, q: usize) -> u64 {
    seed ^ (q as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Channel allocation followed by independent learning on every cluster.
pub fn run_pipeline(scenario: &Scenario, config: &PipelineConfig, r_min: &[f64], seed: u64) -> Result<PipelineResult> {
    let stage_one = allocate(scenario, config.criterion, r_min)?;
    let alloc = &stage_one.allocation;
    let channels: Vec<usize> = (0..scenario.num_channels).filter(|&q| !alloc.d2d_on(q).is_empty()).collect();
    let clusters = channels
        .par_iter()
        .map(|&q| -> Result<ClusterOutcome> {
            let model = ClusterModel::from_scenario(scenario, alloc, q)?;
            let game = model.game()?;
            let nash = enumerate_nash(&game);
            let cseed = cluster_seed(seed, q);
            let trace = run(&game, &config.learner, &config.noise, cseed)?;
            let report = convergence_stats(&trace, &nash, FINAL_WINDOW);
            Ok(ClusterOutcome {
                channel: q,
                members: model.members.clone(),
                seed: cseed,
                powers: report.modal_actions.iter().map(|&a| model.levels[a]).collect(),
                modal_frequency: report.modal_frequency,
                nash_share: report.nash_share,
                window_mean_reward: report.window_mean_reward,
                trace: Some(trace),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut powers = vec![scenario.power.min_level(); scenario.d2d_count()];
    for c in &clusters {
        for (&k, &p) in c.members.iter().zip(&c.powers) {
            powers[k] = p;
        }
    }
    let utility = served_utility(scenario, alloc, &powers)?;
    Ok(PipelineResult { stage_one, clusters, powers, utility })
}
