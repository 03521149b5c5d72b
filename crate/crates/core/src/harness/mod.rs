//! Seeded experiment sweeps: configuration, parallel execution, aggregation
//! and report emission.

use std::collections::{BTreeMap, HashSet};
use std::fs;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{best_fixed_action, opt_lp, LpInstance, LpStatus};
use crate::driver::{regret_report, run, Baseline, RunOptions};
use crate::environments::Regime;
use crate::error::{Error, Result};
use crate::model::alpha;
use crate::seed::{derive, RunSeeds};

mod config;
mod emit;
pub mod verify;

pub use config::{params_for, BudgetConfig, EnvConfig, ExperimentConfig, OutputConfig, PreparedEnv};
pub use emit::{emit, emit_to, read_rows_csv, rows_csv_header, Format};

/// Metrics of one `(T, replication)` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub horizon: usize,
    pub replication: usize,
    pub seed: u64,
    pub cumulative_reward: f64,
    pub raw_cumulative_reward: f64,
    pub opt_gamma: f64,
    pub alpha: Option<f64>,
    pub adversarial_gap: Option<f64>,
    /// Per-round LP value.
    pub opt_lp: Option<f64>,
    pub stochastic_gap: Option<f64>,
    pub max_multiplier: f64,
    pub multiplier_bound: Option<f64>,
    pub fallback_rounds: usize,
    pub tau: Option<usize>,
    pub min_budget: f64,
    pub primal_restarts: u32,
    pub warnings: u64,
    pub final_budget: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    /// Sample standard deviation; zero for a single run.
    pub std: f64,
}

impl Stat {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Self { mean, std }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub horizon: usize,
    pub runs: usize,
    pub cumulative_reward: Stat,
    pub adversarial_gap: Option<Stat>,
    pub stochastic_gap: Option<Stat>,
    pub max_multiplier: Stat,
    pub fallback_rounds: Stat,
    /// Fraction of runs with `M <= 8 m / nu`.
    pub within_multiplier_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub config: ExperimentConfig,
    pub resources: usize,
    pub rows: Vec<RunRow>,
    pub summaries: Vec<Summary>,
}

/// Per-horizon summaries, in ascending horizon order.
pub fn summarize(rows: &[RunRow]) -> Vec<Summary> {
    let mut groups: BTreeMap<usize, Vec<&RunRow>> = BTreeMap::new();
    for r in rows {
        groups.entry(r.horizon).or_default().push(r);
    }
    let optional = |group: &[&RunRow], f: fn(&RunRow) -> Option<f64>| {
        let values: Option<Vec<f64>> = group.iter().map(|r| f(r)).collect();
        values.map(|v| Stat::of(&v))
    };
    groups
        .into_iter()
        .map(|(horizon, group)| {
            let collect = |f: fn(&RunRow) -> f64| Stat::of(&group.iter().map(|r| f(r)).collect::<Vec<_>>());
            let within: Option<Vec<bool>> =
                group.iter().map(|r| r.multiplier_bound.map(|b| r.max_multiplier <= b)).collect();
            Summary {
                horizon,
                runs: group.len(),
                cumulative_reward: collect(|r| r.cumulative_reward),
                adversarial_gap: optional(&group, |r| r.adversarial_gap),
                stochastic_gap: optional(&group, |r| r.stochastic_gap),
                max_multiplier: collect(|r| r.max_multiplier),
                fallback_rounds: collect(|r| r.fallback_rounds as f64),
                within_multiplier_bound: within
                    .map(|w| w.iter().filter(|&&ok| ok).count() as f64 / w.len() as f64),
            }
        })
        .collect()
}

/// Seed of run `(horizon, replication)`.
pub fn run_seed(base_seed: u64, horizon: usize, replication: usize) -> u64 {
    derive(base_seed, &[horizon as u64, replication as u64])
}

/// Runs every `(T, replication)` pair. `jobs = Some(1)` runs serially; `None`
/// uses the global pool. Row order is deterministic either way.
pub fn run_experiment(config: &ExperimentConfig, jobs: Option<usize>) -> Result<AggregateReport> {
    config.validate()?;
    let prepared = PreparedEnv::new(&config.environment, &config.horizons)?;
    let mut grid = Vec::with_capacity(config.horizons.len() * config.replications);
    let mut seen = HashSet::new();
    for &t in &config.horizons {
        for r in 0..config.replications {
            let seed = run_seed(config.base_seed, t, r);
            if !seen.insert(seed) {
                return Err(Error::InvalidParameter(format!("seed collision at T = {t}, replication {r}")));
            }
            grid.push((t, r, seed));
        }
    }
    let lp_values = lp_baselines(config, &prepared)?;
    if let Some(dir) = &config.output.trace_dir {
        if !config.slim {
            fs::create_dir_all(dir)?;
        }
    }

    let job = |&(t, r, seed): &(usize, usize, u64)| {
        one_run(config, &prepared, t, r, seed, lp_values.get(&t).copied().flatten())
            .map_err(|e| Error::Run { horizon: t, replication: r, source: Box::new(e) })
    };
    let results: Vec<Result<RunRow>> = match jobs {
        Some(1) => grid.iter().map(job).collect(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(|| grid.par_iter().map(job).collect()),
        None => grid.par_iter().map(job).collect(),
    };
    let rows = results.into_iter().collect::<Result<Vec<_>>>()?;
    let summaries = summarize(&rows);
    Ok(AggregateReport { config: config.clone(), resources: prepared.resources(), rows, summaries })
}

/// Per-round expected LP value for every horizon of a stochastic environment.
pub fn lp_baselines(config: &ExperimentConfig, prepared: &PreparedEnv) -> Result<BTreeMap<usize, Option<f64>>> {
    let mut out = BTreeMap::new();
    for &t in &config.horizons {
        let env = prepared.build(t)?;
        let value = match (env.regime(), env.expected_means()) {
            (Regime::Stochastic, Some(means)) => {
                let rho = config.budget.initial(t) / t as f64;
                let sol = opt_lp(&LpInstance::from_means(means, rho)?)?;
                (sol.status == LpStatus::Optimal).then_some(sol.value)
            }
            _ => None,
        };
        out.insert(t, value);
    }
    Ok(out)
}

/// Growth of the mean gaps between consecutive horizons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub horizon: usize,
    pub mean_reward: f64,
    pub adversarial_gap: Option<f64>,
    pub stochastic_gap: Option<f64>,
    /// `gap(T) / gap(T_prev)` and `log(gap ratio) / log(T / T_prev)`.
    pub stochastic_ratio: Option<f64>,
    pub stochastic_slope: Option<f64>,
    pub adversarial_ratio: Option<f64>,
    pub adversarial_slope: Option<f64>,
}

pub fn scaling(summaries: &[Summary]) -> Vec<ScalingRow> {
    let mut out: Vec<ScalingRow> = Vec::with_capacity(summaries.len());
    for (i, s) in summaries.iter().enumerate() {
        let adversarial_gap = s.adversarial_gap.map(|g| g.mean);
        let stochastic_gap = s.stochastic_gap.map(|g| g.mean);
        let step = |now: Option<f64>, prev: Option<f64>, prev_t: usize| match (now, prev) {
            (Some(a), Some(b)) => {
                let ratio = a / b;
                (Some(ratio), Some(ratio.ln() / (s.horizon as f64 / prev_t as f64).ln()))
            }
            _ => (None, None),
        };
        let ((sr, ss), (ar, asl)) = match i.checked_sub(1).map(|j| &out[j]) {
            Some(p) => (step(stochastic_gap, p.stochastic_gap, p.horizon), step(adversarial_gap, p.adversarial_gap, p.horizon)),
            None => ((None, None), (None, None)),
        };
        out.push(ScalingRow {
            horizon: s.horizon,
            mean_reward: s.cumulative_reward.mean,
            adversarial_gap,
            stochastic_gap,
            stochastic_ratio: sr,
            stochastic_slope: ss,
            adversarial_ratio: ar,
            adversarial_slope: asl,
        });
    }
    out
}

/// Offline benchmarks of one horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineRow {
    pub horizon: usize,
    pub regime: Regime,
    pub rho: f64,
    pub alpha: Option<f64>,
    /// Per-round LP value and an optimal mixture, for stochastic environments.
    pub opt_lp: Option<f64>,
    pub mixture: Option<Vec<f64>>,
    /// Best fixed action and its total reward, for scripted environments.
    pub best_action: Option<usize>,
    pub opt_gamma: Option<f64>,
}

pub fn baseline_report(config: &ExperimentConfig) -> Result<Vec<BaselineRow>> {
    config.validate()?;
    let prepared = PreparedEnv::new(&config.environment, &config.horizons)?;
    config
        .horizons
        .iter()
        .map(|&t| {
            let env = prepared.build(t)?;
            let rho = config.budget.initial(t) / t as f64;
            let mut row = BaselineRow {
                horizon: t,
                regime: env.regime(),
                rho,
                alpha: env.beta().and_then(|b| alpha(b, rho).ok()),
                opt_lp: None,
                mixture: None,
                best_action: None,
                opt_gamma: None,
            };
            if let Some(script) = prepared.script(t) {
                let mut totals = vec![0.0; script.actions()];
                for rewards in &script.rewards()[..t] {
                    for (acc, r) in totals.iter_mut().zip(rewards) {
                        *acc += r;
                    }
                }
                let (arm, value) = best_fixed_action(&totals);
                row.best_action = Some(arm);
                row.opt_gamma = Some(value);
            } else if let Some(means) = env.expected_means() {
                let sol = opt_lp(&LpInstance::from_means(means, rho)?)?;
                if sol.status == LpStatus::Optimal {
                    row.opt_lp = Some(sol.value);
                    row.mixture = Some(sol.mixture.weights().to_vec());
                }
            }
            Ok(row)
        })
        .collect()
}

fn one_run(
    config: &ExperimentConfig,
    prepared: &PreparedEnv,
    horizon: usize,
    replication: usize,
    seed: u64,
    opt_lp: Option<f64>,
) -> Result<RunRow> {
    let mut env = prepared.build(horizon)?;
    let params = params_for(config, env.as_ref(), horizon)?;
    let options = RunOptions { slim: config.slim, range_policy: config.range_policy() };
    let trace = run(env.as_mut(), &config.mode, &params, RunSeeds::from_run_seed(seed), &options)?;
    if let (Some(dir), false) = (&config.output.trace_dir, config.slim) {
        let file = fs::File::create(dir.join(format!("trace_T{horizon}_r{replication}.csv")))?;
        trace.write_csv(std::io::BufWriter::new(file))?;
    }
    let rep = regret_report(&trace, &Baseline { opt_gamma: None, opt_lp }, &params);
    Ok(RunRow {
        horizon,
        replication,
        seed,
        cumulative_reward: rep.cumulative_reward,
        raw_cumulative_reward: trace.raw_cumulative_reward(),
        opt_gamma: rep.opt_gamma,
        alpha: rep.alpha,
        adversarial_gap: rep.adversarial_gap,
        opt_lp: rep.opt_lp,
        stochastic_gap: rep.stochastic_gap,
        max_multiplier: rep.max_multiplier,
        multiplier_bound: rep.multiplier_bound,
        fallback_rounds: rep.fallback_rounds,
        tau: rep.tau,
        min_budget: rep.min_budget,
        primal_restarts: trace.primal_restarts,
        warnings: trace.warnings,
        final_budget: rep.final_budget,
    })
}
