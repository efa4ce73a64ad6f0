use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::baselines::{exhaustive_priority_search, exhaustive_sum_search, random_allocation};
use super::config::ScenarioConfig;
use super::pipeline::{run_pipeline, PipelineConfig};
use crate::network::UtilityBreakdown;
use crate::{Error, Result};

pub const STRATEGIES: [&str; 4] = ["random", "pipeline", "exhaustive_priority", "exhaustive_sum"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRecord {
    pub replication: usize,
    pub seed: u64,
    pub strategy: String,
    pub total: f64,
    pub cellular: f64,
    pub d2d: f64,
    #[serde(skip)]
    pub wall_time_s: f64,
}

impl ComparisonRecord {
    fn new(replication: usize, seed: u64, strategy: &str, u: (f64, f64), started: Instant) -> Self {
        Self {
            replication,
            seed,
            strategy: strategy.to_string(),
            total: u.0 + u.1,
            cellular: u.0,
            d2d: u.1,
            wall_time_s: started.elapsed().as_secs_f64(),
        }
    }
}

fn sums(u: &UtilityBreakdown) -> (f64, f64) {
    (u.cellular_sum(), u.d2d_sum())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareConfig {
    /// Layout rules; replication `i` uses seed `base_seed + i`.
    pub scenario: ScenarioConfig,
    pub replications: usize,
    pub base_seed: u64,
    pub pipeline: PipelineConfig,
    /// Random allocations averaged per replication.
    pub random_draws: usize,
}

impl CompareConfig {
    pub fn new(scenario: ScenarioConfig, replications: usize, base_seed: u64) -> Self {
        let pipeline = PipelineConfig::default();
        Self { scenario, replications, base_seed, random_draws: pipeline.learner.horizon, pipeline }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    /// Replication-major, strategies in [`STRATEGIES`] order.
    pub records: Vec<ComparisonRecord>,
}

impl ComparisonReport {
    pub fn replications(&self) -> usize {
        self.records.len() / STRATEGIES.len()
    }

    pub fn totals(&self, strategy: &str) -> Vec<f64> {
        self.records.iter().filter(|r| r.strategy == strategy).map(|r| r.total).collect()
    }

    pub fn mean_total(&self, strategy: &str) -> f64 {
        let t = self.totals(strategy);
        t.iter().sum::<f64>() / t.len().max(1) as f64
    }

    /// Columns `replication,seed,strategy,total,cellular,d2d`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for r in &self.records {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }

    /// One row per replication, one total-utility column per strategy.
    pub fn write_plot_data<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["experiment".to_string()];
        header.extend(STRATEGIES.iter().map(|s| s.to_string()));
        w.write_record(&header)?;
        for chunk in self.records.chunks(STRATEGIES.len()) {
            let mut row = vec![(chunk[0].replication + 1).to_string()];
            row.extend(chunk.iter().map(|r| r.total.to_string()));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn manifest(&self) -> serde_json::Value {
        serde_json::json!({
            "x": {"column": "experiment", "label": "experiment index"},
            "y": {"label": "total utility (nats)"},
            "series": STRATEGIES,
            "data": "plot_data.csv",
            "records": "comparison.csv",
            "replications": self.replications(),
        })
    }
}

/// Runs every strategy on independent random scenarios, one per replication.
pub fn compare(config: &CompareConfig) -> Result<ComparisonReport> {
    if config.replications == 0 || config.random_draws == 0 {
        return Err(Error::Config("replications and random draws must be positive".into()));
    }
    let per_rep = (0..config.replications)
        .into_par_iter()
        .map(|i| -> Result<Vec<ComparisonRecord>> {
            let seed = config.base_seed + i as u64;
            let scenario = config.scenario.with_seed(seed).build()?;

            let t = Instant::now();
            let (mut c, mut d) = (0.0, 0.0);
            for draw in 0..config.random_draws {
                let plan = random_allocation(&scenario, seed.wrapping_mul(1_000_003).wrapping_add(draw as u64))?;
                c += plan.utility.cellular_sum();
                d += plan.utility.d2d_sum();
            }
            let n = config.random_draws as f64;
            let random = ComparisonRecord::new(i, seed, STRATEGIES[0], (c / n, d / n), t);

            let t = Instant::now();
            let pipe = run_pipeline(&scenario, &config.pipeline, &config.scenario.r_min(), seed)?;
            let pipeline = ComparisonRecord::new(i, seed, STRATEGIES[1], sums(&pipe.utility), t);

            let t = Instant::now();
            let pr = exhaustive_priority_search(&scenario)?;
            let priority = ComparisonRecord::new(i, seed, STRATEGIES[2], sums(&pr.utility), t);

            let t = Instant::now();
            let su = exhaustive_sum_search(&scenario)?;
            let sum = ComparisonRecord::new(i, seed, STRATEGIES[3], sums(&su.utility), t);
            Ok(vec![random, pipeline, priority, sum])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ComparisonReport { records: per_rep.into_iter().flatten().collect() })
}
