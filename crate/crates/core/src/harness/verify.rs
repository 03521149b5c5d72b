//! Property checks behind the acceptance suite. Each check returns a verdict
//! with a one-line summary of what was measured.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{emit_to, run_experiment, BudgetConfig, EnvConfig, ExperimentConfig, Format, OutputConfig};
use crate::baselines::{opt_lp, opt_lp_oracle, LpInstance, LpStatus};
use crate::driver::{run, ModeConfig, PrimalKind, RunOptions, RunTrace};
use crate::environments::{
    translate_rescale_env, AdversarialScript, BilateralTrade, BilateralTradeSpec, BoundedDist, Environment, Inventory,
    InventorySpec, Noise, StochasticBwrk, StochasticSpec,
};
use crate::error::Result;
use crate::minimizers::{DualMinimizer, FixedShare, Ogd};
use crate::model::{alpha, ProblemParams};
use crate::seed::{derive, RunSeeds};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self { name: name.to_string(), passed, detail }
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{verdict}] {}: {}", self.name, self.detail)
    }
}

/// Fallback-rule violations in a full trace: negative budgets, or a round with
/// some budget below one that did not play the void action.
pub fn fallback_violations(trace: &RunTrace) -> usize {
    let mut bad = trace.final_budget.iter().filter(|&&b| b < 0.0).count();
    for r in &trace.rounds {
        if r.budget.iter().any(|&b| b < 0.0) {
            bad += 1;
        }
        if r.budget.iter().any(|&b| b < 1.0) && r.action != trace.void_action {
            bad += 1;
        }
    }
    bad
}

fn random_dist(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> BoundedDist {
    let a = rng.random_range(lo..=hi);
    let b = rng.random_range(lo..=hi);
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    match rng.random_range(0..3) {
        0 => BoundedDist::Constant { value: a },
        1 if a < b => BoundedDist::Uniform { lo: a, hi: b },
        _ => BoundedDist::Bernoulli { lo: a, hi: b, p: rng.random() },
    }
}

fn random_stochastic(rng: &mut ChaCha8Rng) -> StochasticBwrk {
    let k = rng.random_range(2..=5);
    let m = rng.random_range(1..=3);
    let void = rng.random_range(0..k);
    let mean_rewards = (0..k).map(|_| rng.random::<f64>()).collect();
    let mean_costs = (0..k)
        .map(|a| (0..m).map(|_| if a == void { -rng.random::<f64>() } else { rng.random_range(-1.0..=1.0) }).collect())
        .collect();
    let noise = [Noise::None, Noise::Uniform { half_width: rng.random() }, Noise::Bernoulli][rng.random_range(0..3)];
    StochasticBwrk::new(StochasticSpec { mean_rewards, mean_costs, noise, void_index: void })
        .expect("generated spec is valid")
}

fn random_script(rng: &mut ChaCha8Rng, horizon: usize) -> AdversarialScript {
    let k = rng.random_range(2..=5);
    let m = rng.random_range(1..=3);
    let beta = rng.random_range(0.0..=0.5);
    let mut rewards = Vec::with_capacity(horizon);
    let mut costs = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        rewards.push((0..k).map(|_| rng.random::<f64>()).collect());
        costs.push(
            (0..k)
                .map(|a| {
                    (0..m)
                        .map(|_| if a + 1 == k { rng.random_range(-1.0..=-beta) } else { rng.random_range(-1.0..=1.0) })
                        .collect()
                })
                .collect(),
        );
    }
    AdversarialScript::new(beta, rewards, costs).expect("generated script is valid")
}

fn random_inventory(rng: &mut ChaCha8Rng) -> InventorySpec {
    InventorySpec {
        open_reward: random_dist(rng, 0.0, 1.0),
        open_cost: random_dist(rng, 0.0, 1.0),
        supplier_reward: random_dist(rng, -1.0, 0.0),
        supplier_cost: random_dist(rng, -1.0, 0.0),
    }
}

fn random_bilateral(rng: &mut ChaCha8Rng) -> BilateralTradeSpec {
    let seller = random_dist(rng, 0.0, 1.0);
    let buyer = match random_dist(rng, 0.01, 1.0) {
        BoundedDist::Uniform { lo, hi } => BoundedDist::Uniform { lo: lo.max(0.0), hi },
        other => other,
    };
    BilateralTradeSpec { seller, buyer, grid_points: 21 }
}

/// Randomized runs across the four environment kinds, cycling through them.
/// Known and unknown mode alternate; budgets range from empty to generous.
pub fn budget_safety(runs: usize, horizon: usize, base_seed: u64) -> Check {
    let outcomes: Vec<std::result::Result<usize, String>> = (0..runs)
        .into_par_iter()
        .map(|i| {
            let seed = derive(base_seed, &[i as u64]);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut env: Box<dyn Environment> = match i % 4 {
                0 => Box::new(random_stochastic(&mut rng)),
                1 => Box::new(std::sync::Arc::new(random_script(&mut rng, horizon)).replay()),
                2 => Box::new(translate_rescale_env(Inventory::new(random_inventory(&mut rng)).unwrap(), -1.0, 1.0).unwrap()),
                _ => Box::new(
                    translate_rescale_env(BilateralTrade::new(random_bilateral(&mut rng)).unwrap(), -1.0, 1.0).unwrap(),
                ),
            };
            let budget = match rng.random_range(0..3) {
                0 => 0.0,
                1 => rng.random_range(0.0..3.0),
                _ => rng.random_range(0.0..0.5) * horizon as f64,
            };
            let beta = env.beta();
            let params = ProblemParams::new(horizon, env.resources(), budget, beta, 0.05).map_err(|e| e.to_string())?;
            let config = if (i / 4) % 2 == 0 {
                ModeConfig::known_beta(beta.unwrap_or(0.0) * rng.random::<f64>())
            } else {
                ModeConfig::unknown_beta()
            };
            let trace = run(env.as_mut(), &config, &params, RunSeeds::from_run_seed(seed), &RunOptions::default())
                .map_err(|e| format!("run {i}: {e}"))?;
            Ok(fallback_violations(&trace))
        })
        .collect();
    let mut violations = 0;
    let mut errors = Vec::new();
    for o in outcomes {
        match o {
            Ok(v) => violations += v,
            Err(e) => errors.push(e),
        }
    }
    let passed = violations == 0 && errors.is_empty();
    let mut detail = format!("{runs} runs at T = {horizon}: {violations} violations, {} run errors", errors.len());
    if let Some(e) = errors.first() {
        detail.push_str(&format!(" (first: {e})"));
    }
    Check::new("budget safety", passed, detail)
}

/// Stochastic instance with `K = 4`, `m = 2`, `beta = 0.2`, `rho = 0.3`.
pub fn sublinearity_config(horizons: Vec<usize>, replications: usize) -> ExperimentConfig {
    ExperimentConfig {
        environment: EnvConfig::Stochastic(StochasticSpec {
            mean_rewards: vec![0.9, 0.6, 0.4, 0.0],
            mean_costs: vec![vec![0.7, 0.5], vec![0.3, 0.6], vec![0.2, 0.1], vec![-0.2, -0.2]],
            noise: Noise::Bernoulli,
            void_index: 3,
        }),
        mode: ModeConfig::known_beta(0.2),
        budget: BudgetConfig::PerRound(0.3),
        delta: 0.05,
        horizons,
        replications,
        base_seed: 2024,
        slim: true,
        clamp_out_of_range: false,
        output: OutputConfig::default(),
    }
}

/// Mean stochastic gap positive at every horizon, and the gap ratio between
/// consecutive horizons inside `[lo, hi]`.
pub fn stochastic_sublinearity(config: &ExperimentConfig, lo: f64, hi: f64) -> Result<Check> {
    let report = run_experiment(config, None)?;
    let gaps: Vec<f64> = report.summaries.iter().map(|s| s.stochastic_gap.map_or(f64::NAN, |g| g.mean)).collect();
    let ratios: Vec<f64> = gaps.windows(2).map(|w| w[1] / w[0]).collect();
    let positive = gaps.iter().all(|&g| g > 0.0);
    let in_band = ratios.iter().all(|r| (lo..=hi).contains(r));
    let detail = format!(
        "mean gaps {} at T = {:?}; ratios {} (band [{lo}, {hi}])",
        fmt_list(&gaps, 1),
        config.horizons,
        fmt_list(&ratios, 3)
    );
    Ok(Check::new("stochastic regret sublinearity", positive && in_band && !gaps.is_empty(), detail))
}

/// Two-phase script experiment in known mode with `beta_tilde = beta`.
pub fn two_phase_config(beta: f64, rho: f64, horizons: Vec<usize>, replications: usize) -> ExperimentConfig {
    ExperimentConfig {
        environment: EnvConfig::TwoPhase { arms: 2, resources: 1, beta },
        mode: ModeConfig::known_beta(beta),
        budget: BudgetConfig::PerRound(rho),
        delta: 0.05,
        horizons,
        replications,
        base_seed: 4242,
        slim: true,
        clamp_out_of_range: false,
        output: OutputConfig::default(),
    }
}

/// Mean reward at the largest horizon at least `fraction * alpha * OPT_gamma`,
/// and the normalized deficit `(alpha OPT_gamma - reward) / OPT_gamma` never
/// grows above the larger of its previous value and zero.
pub fn competitive_ratio(name: &str, config: &ExperimentConfig, fraction: f64) -> Result<Check> {
    let report = run_experiment(config, None)?;
    let mut deficits = Vec::new();
    let mut ratios = Vec::new();
    for s in &report.summaries {
        let rows: Vec<_> = report.rows.iter().filter(|r| r.horizon == s.horizon).collect();
        let opt = rows.iter().map(|r| r.opt_gamma).sum::<f64>() / rows.len() as f64;
        let a = rows[0].alpha.unwrap_or(f64::NAN);
        deficits.push((a * opt - s.cumulative_reward.mean) / opt);
        ratios.push(s.cumulative_reward.mean / (a * opt));
    }
    let last_ok = ratios.last().is_some_and(|&r| r >= fraction);
    let shrinking = deficits.windows(2).all(|w| w[1] <= w[0].max(0.0));
    let detail = format!(
        "reward / (alpha OPT_gamma) = {} at T = {:?} (need >= {fraction} at the last); normalized deficits {}",
        fmt_list(&ratios, 4),
        config.horizons,
        fmt_list(&deficits, 4)
    );
    Ok(Check::new(name, last_ok && shrinking, detail))
}

fn random_gradients(rng: &mut ChaCha8Rng, horizon: usize, m: usize) -> Vec<Vec<f64>> {
    // Mix of i.i.d., constant-sign and switching patterns.
    let style = rng.random_range(0..3);
    let signs: Vec<f64> = (0..m).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
    let switch = rng.random_range(1..horizon);
    (0..horizon)
        .map(|t| {
            (0..m)
                .map(|i| match style {
                    0 => rng.random_range(-1.0..=1.0),
                    1 => signs[i] * rng.random::<f64>(),
                    _ => {
                        let s = if t < switch { signs[i] } else { -signs[i] };
                        s * rng.random_range(0.5..=1.0)
                    }
                })
                .collect()
        })
        .collect()
}

fn box_grid(m: usize, side: f64, step: f64) -> Vec<Vec<f64>> {
    let n = (side / step).round() as usize;
    let mut points = vec![vec![]];
    for _ in 0..m {
        points = points
            .into_iter()
            .flat_map(|p| {
                (0..=n).map(move |j| {
                    let mut q = p.clone();
                    q.push(j as f64 * step);
                    q
                })
            })
            .collect();
    }
    points
}

/// OGD interval regret against every grid point of `[0, 2]^m` on every interval,
/// compared with `|lambda - lambda_t1|^2 / (2 eta) + eta m T / 2`.
pub fn ogd_interval_regret(sequences: usize, horizon: usize, base_seed: u64) -> Check {
    let t = horizon as f64;
    let etas = [1.0 / (2.0 * t.sqrt()), 1.0 / t.sqrt(), 0.1];
    let results: Vec<(usize, f64)> = (0..sequences)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive(base_seed, &[s as u64]));
            let m = 1 + s % 3;
            let eta = etas[(s / 3) % etas.len()];
            let grads = random_gradients(&mut rng, horizon, m);
            let mut ogd = Ogd::new(m, eta).unwrap();
            let mut iterates = Vec::with_capacity(horizon);
            for g in &grads {
                iterates.push(ogd.next().lambda);
                ogd.observe(g).unwrap();
            }
            let grid = box_grid(m, 2.0, if m == 3 { 0.5 } else { 0.25 });
            let slack_const = 0.5 * eta * m as f64 * t;
            let mut violations = 0;
            let mut min_margin = f64::INFINITY;
            for t1 in 0..horizon {
                let start = &iterates[t1];
                let dist: Vec<f64> = grid
                    .iter()
                    .map(|l| l.iter().zip(start).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / (2.0 * eta) + slack_const)
                    .collect();
                let mut gsum = vec![0.0; m];
                let mut played = 0.0;
                for t2 in t1..horizon {
                    for i in 0..m {
                        gsum[i] += grads[t2][i];
                        played += iterates[t2][i] * grads[t2][i];
                    }
                    for (l, bound) in grid.iter().zip(&dist) {
                        let regret = l.iter().zip(&gsum).map(|(a, g)| a * g).sum::<f64>() - played;
                        let margin = bound - regret;
                        if margin < 0.0 {
                            violations += 1;
                        }
                        min_margin = min_margin.min(margin);
                    }
                }
            }
            (violations, min_margin)
        })
        .collect();
    let violations: usize = results.iter().map(|r| r.0).sum();
    let margin = results.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    Check::new(
        "OGD interval regret",
        violations == 0,
        format!("{sequences} sequences, T = {horizon}: {violations} violations, smallest margin {margin:.4}"),
    )
}

/// Fixed share on the scaled simplex against piecewise-stationary gradients:
/// regret on each phase against each vertex within `slack * (2/nu) sqrt(T ln 2mT)`.
pub fn fixed_share_adaptivity(horizon: usize, seeds: usize, slack: f64, base_seed: u64) -> Check {
    let cases: Vec<(usize, f64, usize)> = [1usize, 3]
        .iter()
        .flat_map(|&m| [0.25, 0.5].into_iter().flat_map(move |nu| (0..seeds).map(move |s| (m, nu, s))))
        .collect();
    let results: Vec<(f64, f64)> = cases
        .par_iter()
        .map(|&(m, nu, s)| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive(base_seed, &[m as u64, nu.to_bits(), s as u64]));
            let bounds = [0, horizon / 3, 2 * horizon / 3, horizon];
            let means: Vec<Vec<f64>> =
                (0..3).map(|_| (0..m).map(|_| rng.random_range(-0.8..=0.8)).collect()).collect();
            let mut dual = FixedShare::tuned(m, nu, horizon).unwrap();
            let mut worst: f64 = f64::NEG_INFINITY;
            for phase in 0..3 {
                let mut realized = 0.0;
                let mut sums = vec![0.0; m];
                for _ in bounds[phase]..bounds[phase + 1] {
                    let g: Vec<f64> =
                        means[phase].iter().map(|mu| (mu + rng.random_range(-0.2..=0.2)).clamp(-1.0, 1.0)).collect();
                    let lambda = dual.next().lambda;
                    realized += lambda.iter().zip(&g).map(|(l, x)| l * x).sum::<f64>();
                    for (acc, x) in sums.iter_mut().zip(&g) {
                        *acc += x;
                    }
                    dual.observe(&g).unwrap();
                }
                let best = sums.iter().fold(0.0f64, |acc, s| acc.max(s / nu));
                worst = worst.max(best - realized);
            }
            let bound = slack * (2.0 / nu) * (horizon as f64 * (2.0 * m as f64 * horizon as f64).ln()).sqrt();
            (worst, bound)
        })
        .collect();
    let violations = results.iter().filter(|(w, b)| w > b).count();
    let ratio = results.iter().map(|(w, b)| w / b).fold(f64::NEG_INFINITY, f64::max);
    Check::new(
        "fixed-share weak adaptivity",
        violations == 0,
        format!(
            "{} sequences, T = {horizon}: {violations} phase-regret violations, largest regret / bound {ratio:.4}",
            results.len()
        ),
    )
}

/// Unknown mode on a stochastic instance with `beta = 0.3`, `rho = 0.2`.
pub fn multiplier_config(resources: usize, horizon: usize, replications: usize) -> ExperimentConfig {
    let spend = [vec![0.8, 0.5], vec![0.4, 0.7], vec![0.1, 0.2]];
    let mut mean_costs: Vec<Vec<f64>> = spend.iter().map(|row| row[..resources].to_vec()).collect();
    mean_costs.push(vec![-0.3; resources]);
    ExperimentConfig {
        environment: EnvConfig::Stochastic(StochasticSpec {
            mean_rewards: vec![0.9, 0.7, 0.3, 0.0],
            mean_costs,
            noise: Noise::Bernoulli,
            void_index: 3,
        }),
        mode: ModeConfig::unknown_beta(),
        budget: BudgetConfig::PerRound(0.2),
        delta: 0.05,
        horizons: vec![horizon],
        replications,
        base_seed: 99 + resources as u64,
        slim: true,
        clamp_out_of_range: false,
        output: OutputConfig::default(),
    }
}

/// Fraction of runs with `max |lambda|_1 <= 8 m / nu` at least `required`.
pub fn multiplier_boundedness(configs: &[ExperimentConfig], required: f64) -> Result<Check> {
    let mut within = 0usize;
    let mut total = 0usize;
    let mut largest: f64 = 0.0;
    for config in configs {
        let report = run_experiment(config, None)?;
        for r in &report.rows {
            total += 1;
            let bound = r.multiplier_bound.unwrap_or(f64::NAN);
            if r.max_multiplier <= bound {
                within += 1;
            }
            largest = largest.max(r.max_multiplier / bound);
        }
    }
    let fraction = within as f64 / total as f64;
    Ok(Check::new(
        "multiplier boundedness",
        total > 0 && fraction >= required,
        format!("{within}/{total} runs within 8m/nu ({:.1}%), largest M / bound {largest:.4}", 100.0 * fraction),
    ))
}

fn random_lp(rng: &mut ChaCha8Rng) -> LpInstance {
    let k = rng.random_range(2..=5);
    let m = rng.random_range(1..=3);
    let void = rng.random_range(0..k);
    let f_bar = (0..k).map(|a| if a == void { rng.random_range(0.0..=0.2) } else { rng.random() }).collect();
    let c_bar = (0..k)
        .map(|a| {
            (0..m).map(|_| if a == void { rng.random_range(-1.0..=-0.1) } else { rng.random_range(-1.0..=1.0) }).collect()
        })
        .collect();
    LpInstance::new(f_bar, c_bar, rng.random_range(0.0..=0.5)).expect("generated instance is valid")
}

/// Simplex solver against the grid oracle, plus the analytic two-arm instance.
pub fn lp_correctness(instances: usize, step: f64, tol: f64, base_seed: u64) -> Result<Check> {
    let results: Vec<Result<(f64, bool)>> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive(base_seed, &[i as u64]));
            let inst = random_lp(&mut rng);
            let sol = opt_lp(&inst)?;
            let oracle = opt_lp_oracle(&inst, step);
            let w = sol.mixture.weights();
            let feasible = sol.status == LpStatus::Optimal
                && w.iter().all(|&x| x >= -1e-9)
                && (w.iter().sum::<f64>() - 1.0).abs() <= 1e-9
                && inst.consumption(w).iter().all(|&c| c <= inst.rho + 1e-9);
            Ok((oracle.map_or(f64::INFINITY, |o| (sol.value - o).abs()), feasible))
        })
        .collect();
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    let worst = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let infeasible = results.iter().filter(|r| !r.1).count();

    let analytic = LpInstance::new(vec![1.0, 0.0], vec![vec![1.0], vec![-0.25]], 0.25)?;
    let sol = opt_lp(&analytic)?;
    let w = sol.mixture.weights();
    let analytic_ok = (sol.value - 0.4).abs() <= 1e-9 && (w[0] - 0.4).abs() <= 1e-9 && (w[1] - 0.6).abs() <= 1e-9;
    Ok(Check::new(
        "LP correctness",
        worst <= tol && infeasible == 0 && analytic_ok,
        format!(
            "{instances} instances: largest |simplex - grid| = {worst:.5} (tol {tol}), {infeasible} infeasible mixtures; \
             analytic value {:.12}, mixture ({:.12}, {:.12})",
            sol.value, w[0], w[1]
        ),
    ))
}

/// Pure-void policy in bilateral trade from an empty stock: raw reward -1,
/// cost -1 and `B_t = t - 1` in every round.
pub fn bilateral_void(horizon: usize) -> Result<Check> {
    let spec = BilateralTradeSpec {
        seller: BoundedDist::Uniform { lo: 0.0, hi: 1.0 },
        buyer: BoundedDist::Uniform { lo: 0.0, hi: 1.0 },
        grid_points: 21,
    };
    let mut env = translate_rescale_env(BilateralTrade::new(spec.clone())?, -1.0, 1.0)?;
    let void = spec.void_action();
    let params = ProblemParams::new(horizon, 1, 0.0, Some(1.0), 0.05)?;
    let config = ModeConfig::known_beta(1.0).with_primal(PrimalKind::Fixed { action: void });
    let trace = run(&mut env, &config, &params, RunSeeds::from_run_seed(1), &RunOptions::default())?;
    let mismatches = trace
        .rounds
        .iter()
        .filter(|r| {
            r.action != void
                || trace.raw_reward(r.reward) != -1.0
                || r.cost != [-1.0]
                || r.budget != [(r.t - 1) as f64]
        })
        .count();
    let final_ok = trace.final_budget == [horizon as f64];
    Ok(Check::new(
        "bilateral-trade void mechanics",
        mismatches == 0 && final_ok && trace.rounds.len() == horizon,
        format!("T = {horizon}: {mismatches} mismatching rounds, final budget {:?}", trace.final_budget),
    ))
}

/// `alpha(0, 0.5)` is exactly one half, and the two-phase sweep holds with it.
pub fn zero_beta_ratio(horizons: Vec<usize>, replications: usize, fraction: f64) -> Result<Check> {
    let a = alpha(0.0, 0.5)?;
    let sweep = competitive_ratio("zero-beta sweep", &two_phase_config(0.0, 0.5, horizons, replications), fraction)?;
    Ok(Check::new(
        "competitive ratio at beta = 0",
        a == 0.5 && sweep.passed,
        format!("alpha = {a}; {}", sweep.detail),
    ))
}

/// Runs each config twice (serial and parallel) and compares emitted bytes.
pub fn determinism(configs: &[ExperimentConfig]) -> Result<Check> {
    let mut differing = 0;
    for config in configs {
        let a = run_experiment(config, Some(1))?;
        let b = run_experiment(config, None)?;
        for format in [Format::Csv, Format::Json] {
            let (mut x, mut y) = (Vec::new(), Vec::new());
            emit_to(&a, format, &mut x)?;
            emit_to(&b, format, &mut y)?;
            if x != y {
                differing += 1;
            }
        }
    }
    Ok(Check::new(
        "determinism",
        differing == 0,
        format!("{} configs x 2 formats: {differing} differing report files", configs.len()),
    ))
}

fn fmt_list(values: &[f64], digits: usize) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("{v:.digits$}")).collect();
    format!("[{}]", parts.join(", "))
}

/// Every check at the stated sizes. `quick` shrinks the budget-safety, OGD,
/// LP and determinism sweeps; the regret sweeps are cheap and always run in
/// full because their scaling checks are meaningless on short horizons.
pub fn suite(quick: bool) -> Result<Vec<Check>> {
    let (runs, sequences, lp) = if quick { (100, 30, 20) } else { (1000, 200, 100) };
    let sub = sublinearity_config(vec![2000, 8000, 32000], 30);
    let adv = two_phase_config(0.25, 0.25, vec![5000, 20000, 50000], 20);
    let zero = two_phase_config(0.0, 0.5, vec![5000, 20000, 50000], 20);
    let mult: Vec<_> = [1, 2].iter().map(|&m| multiplier_config(m, 10000, 50)).collect();
    let mut repeat = vec![sub.clone(), adv.clone()];
    if !quick {
        repeat.push(zero);
        repeat.extend(mult.iter().cloned());
    }
    Ok(vec![
        budget_safety(runs, 2000, 1),
        stochastic_sublinearity(&sub, 1.3, 3.0)?,
        competitive_ratio("adversarial competitive ratio", &adv, 0.9)?,
        ogd_interval_regret(sequences, 200, 3),
        fixed_share_adaptivity(2000, 5, 2.0, 5),
        multiplier_boundedness(&mult, 0.95)?,
        lp_correctness(lp, 0.01, 0.02, 7)?,
        bilateral_void(100)?,
        zero_beta_ratio(vec![5000, 20000, 50000], 20, 0.9)?,
        determinism(&repeat)?,
    ])
}
