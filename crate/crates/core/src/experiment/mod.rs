//! Scenario files, the two-stage pipeline, baseline strategies and
//! comparison export.

mod baselines;
mod compare;
mod config;
mod data;
mod pipeline;

pub use baselines::{
    exhaustive_priority_search, exhaustive_sum_search, random_allocation, Plan, EXHAUSTIVE_LIMIT,
};
pub use compare::{compare, CompareConfig, ComparisonRecord, ComparisonReport, STRATEGIES};
pub use config::{
    AutoPositions, ExplicitPositions, FadingSpec, GainOverrides, PathLossSpec, PositionSpec, RateTarget,
    ScenarioConfig,
};
pub use data::{table4_game, TABLE1_CELLULAR_CHANNELS, TABLE1_SCENARIO_JSON, TABLE4_PAYOFFS_CSV};
pub use pipeline::{
    allocate, cluster_seed, run_pipeline, AllocationOutcome, ClusterOutcome, PipelineConfig, PipelineResult,
};
