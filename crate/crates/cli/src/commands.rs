use std::collections::BTreeMap;
use std::fs::File;
use std::io::Write;

use d2d_core::allocation::Criterion;
use d2d_core::experiment::{self, cluster_seed, CompareConfig, ScenarioConfig, STRATEGIES};
use d2d_core::game::{
    enumerate_nash, max_potential_violation, potential_maximizers, price_of_stability, ClusterModel,
    PotentialFunction, StrategicGame,
};
use d2d_core::learning::{convergence_stats, run, LearnerParams, NoiseModel, FINAL_WINDOW};
use d2d_core::{Error, Result};
use serde_json::json;

use crate::output::{write_atomic, write_json};
use crate::{AllocateArgs, AnalyzeArgs, CompareArgs, GameSource, LearnArgs, LearnerFlags};

fn load_scenario(path: &std::path::Path, seed: Option<u64>) -> Result<ScenarioConfig> {
    let cfg = ScenarioConfig::load(path).map_err(|e| with_path(path, e))?;
    Ok(match seed {
        Some(s) => cfg.with_seed(s),
        None => cfg,
    })
}

impl LearnerFlags {
    fn params(&self) -> Result<(LearnerParams, NoiseModel)> {
        let p = LearnerParams {
            c_lambda: self.c_lambda,
            c_epsilon: self.c_epsilon,
            rho_lambda: self.rho_lambda,
            zeta: self.zeta,
            memory: self.memory,
            horizon: self.horizon,
            epsilon_override: self.epsilon,
        };
        p.validate()?;
        Ok((p, NoiseModel::new(self.noise)?))
    }
}

fn with_path(path: &std::path::Path, e: Error) -> Error {
    match e {
        Error::Io(io) => Error::Config(format!("{}: {io}", path.display())),
        other => other,
    }
}

pub fn allocate(args: AllocateArgs) -> Result<()> {
    let cfg = load_scenario(&args.scenario, args.common.seed)?;
    let scenario = cfg.build()?;
    let outcome = experiment::allocate(&scenario, args.criterion, &cfg.r_min())?;
    let alloc = &outcome.allocation;

    write_atomic(&args.common.out, "allocation.csv", |buf| {
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(["user_id", "user_kind", "channel"])?;
        for (l, user) in scenario.cellular.iter().enumerate() {
            w.write_record([user.id.as_str(), "cellular", &(alloc.cellular_channel[l] + 1).to_string()])?;
        }
        for (k, user) in scenario.d2d.iter().enumerate() {
            let ch = alloc.d2d_channel[k].map(|q| (q + 1).to_string()).unwrap_or_default();
            w.write_record([user.id.as_str(), "d2d", &ch])?;
        }
        w.flush()?;
        Ok(())
    })?;

    let ids = |f: &dyn Fn(usize) -> f64| -> BTreeMap<String, f64> {
        scenario.cellular.iter().enumerate().map(|(l, u)| (u.id.clone(), f(l))).collect()
    };
    let lower_bound = match args.criterion {
        Criterion::Qos => None,
        _ => Some(d2d_core::network::cellular_lower_bound(&scenario, alloc)?),
    };
    let summary = json!({
        "criterion": args.criterion,
        "seed": cfg.seed,
        "cellular_count": scenario.cellular_count(),
        "d2d_count": scenario.d2d_count(),
        "served_d2d": outcome.served,
        "matching_weight": outcome.matching_weight,
        "cellular_lower_bound": lower_bound,
        "cluster_loads": ids(&|l| outcome.loads[l]),
        "max_load": outcome.loads.iter().copied().fold(0.0, f64::max),
        "tolerable_interference": outcome.thresholds.as_ref().map(|t| ids(&|l| t[l])),
    });
    write_json(&args.common.out, "summary.json", &summary)
}

/// Game, player names and learning seed for a game source.
fn resolve_game(source: &GameSource, seed: Option<u64>) -> Result<(StrategicGame, Vec<String>, Option<ClusterModel>, u64)> {
    if let Some(path) = &source.payoffs {
        let file = File::open(path).map_err(|e| with_path(path, e.into()))?;
        let game = StrategicGame::read_csv(file)?;
        let names = (1..=game.players()).map(|k| format!("player_{k}")).collect();
        return Ok((game, names, None, seed.unwrap_or(0)));
    }
    let (Some(path), Some(channel)) = (&source.scenario, source.channel) else {
        return Err(Error::Config("give either --payoffs or --scenario with --channel".into()));
    };
    let cfg = load_scenario(path, seed)?;
    let scenario = cfg.build()?;
    if channel == 0 || channel > scenario.num_channels {
        return Err(Error::Config(format!("channel must lie in 1..={}", scenario.num_channels)));
    }
    let outcome = experiment::allocate(&scenario, source.criterion, &cfg.r_min())?;
    let model = ClusterModel::from_scenario(&scenario, &outcome.allocation, channel - 1)
        .map_err(|e| match e {
            Error::EmptyCluster(_) => Error::EmptyCluster(channel),
            other => other,
        })?;
    let names = model.members.iter().map(|&k| scenario.d2d[k].id.clone()).collect();
    Ok((model.game()?, names, Some(model), cluster_seed(cfg.seed, channel - 1)))
}

fn labelled(game: &StrategicGame, profiles: &[usize]) -> Vec<Vec<f64>> {
    profiles.iter().map(|&p| game.labels(p)).collect()
}

pub fn learn(args: LearnArgs) -> Result<()> {
    let (params, noise) = args.learner.params()?;
    let (game, names, _, seed) = resolve_game(&args.source, args.common.seed)?;
    let trace = run(&game, &params, &noise, seed)?;
    let nash = enumerate_nash(&game);
    let report = convergence_stats(&trace, &nash, FINAL_WINDOW);

    write_atomic(&args.common.out, "trace.csv", |buf| trace.write_csv(buf))?;
    let summary = json!({
        "players": names,
        "actions": game.action_sets(),
        "seed": seed,
        "horizon": params.horizon,
        "window": report.window,
        "nash_profiles": labelled(&game, &nash.profiles),
        "modal_profile": game.labels(report.modal_profile),
        "modal_frequency": report.modal_frequency,
        "nash_share": report.nash_share,
        "action_frequency": report.action_frequency,
        "window_mean_reward": report.window_mean_reward,
    });
    write_json(&args.common.out, "summary.json", &summary)
}

pub fn compare(args: CompareArgs) -> Result<()> {
    let cfg = load_scenario(&args.scenario, None)?;
    let (learner, noise) = args.learner.params()?;
    let base = args.common.seed.unwrap_or(cfg.seed);
    let mut config = CompareConfig::new(cfg, args.replications, base);
    config.pipeline.criterion = args.criterion;
    config.pipeline.learner = learner;
    config.pipeline.noise = noise;
    config.random_draws = args.random_draws.unwrap_or(learner.horizon);
    let report = experiment::compare(&config)?;

    let out = &args.common.out;
    write_atomic(out, "comparison.csv", |buf| report.write_csv(buf))?;
    write_atomic(out, "plot_data.csv", |buf| report.write_plot_data(buf))?;
    write_json(out, "manifest.json", &report.manifest())?;

    let mut err = std::io::stderr().lock();
    for s in STRATEGIES {
        let secs: f64 = report.records.iter().filter(|r| r.strategy == s).map(|r| r.wall_time_s).sum();
        let _ = writeln!(err, "{s:>20}: mean total {:>10.4}  time {secs:.3}s", report.mean_total(s));
    }
    Ok(())
}

pub fn analyze(args: AnalyzeArgs) -> Result<()> {
    let (game, names, model, _) = resolve_game(&args.source, args.common.seed)?;
    let nash = enumerate_nash(&game);
    let pos = match price_of_stability(&game, &nash) {
        Ok(v) => json!(v),
        Err(e @ (Error::EmptyNashSet | Error::NonPositiveWelfare(_))) => json!({ "undefined": e.to_string() }),
        Err(e) => return Err(e),
    };
    let welfare_max = (0..game.profile_count()).max_by(|&a, &b| game.welfare(a).total_cmp(&game.welfare(b)));

    let mut analysis = json!({
        "players": names,
        "actions": game.action_sets(),
        "nash_profiles": labelled(&game, &nash.profiles),
        "welfare_optimum": welfare_max.map(|p| game.labels(p)),
        "price_of_stability": pos,
    });
    let potential: Option<PotentialFunction> = match &model {
        Some(m) => Some(m.potential()?),
        None if game.action_sets().iter().flatten().all(|&p| p > 0.0) => {
            Some(PotentialFunction::power_potential(game.action_sets(), &vec![args.price; game.players()])?)
        }
        None => None,
    };
    if let Some(v) = potential {
        let maxi = potential_maximizers(&v, &game);
        analysis["potential_maximizers"] = json!(labelled(&game, &maxi.profiles));
        analysis["max_potential_violation"] = json!(max_potential_violation(&game, &v));
    }
    if let Some(m) = &model {
        let b = m.pos_upper_bound();
        analysis["gamma_min"] = json!(b.gamma_min);
        analysis["pos_upper_bound"] = json!(b.bound);
    }
    write_json(&args.common.out, "analysis.json", &analysis)
}

