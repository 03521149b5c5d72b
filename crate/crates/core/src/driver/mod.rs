//! The primal-dual loop with budget tracking and void-action fallback.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::environments::Environment;
use crate::error::{ensure_len, Error, Result};
use crate::minimizers::{
    compute_eta, DualMinimizer, Exp3Six, FixedAction, FixedShare, Hedge, Ogd, PayoffRange, PrimalMinimizer,
};
use crate::model::{concentration_radius, dual_gradient, lagrangian_value, ProblemParams, RangeGuard, RangePolicy};
use crate::seed::RunSeeds;

mod report;
mod trace;

pub use report::{dual_segment_regret, regret_report, Baseline, RegretReport, SegmentRegret};
pub use trace::{RoundRecord, RunTrace};
pub(crate) use trace::csv_err;

/// Whether a lower bound on the replenishment factor is available.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mode {
    KnownBeta { beta_tilde: f64 },
    UnknownBeta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PrimalKind {
    /// Bandit feedback.
    #[default]
    #[serde(rename = "exp3six")]
    Exp3Six,
    /// Full feedback over the whole action set.
    Hedge,
    /// Always plays `action`; a reference policy, not a learner.
    Fixed { action: usize },
}

/// Mode plus primal choice. The dual follows from the mode: fixed share on the
/// scaled simplex when `beta_tilde` is known, OGD on the orthant otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeConfig {
    pub mode: Mode,
    #[serde(default)]
    pub primal: PrimalKind,
}

impl ModeConfig {
    pub fn known_beta(beta_tilde: f64) -> Self {
        Self { mode: Mode::KnownBeta { beta_tilde }, primal: PrimalKind::Exp3Six }
    }

    pub fn unknown_beta() -> Self {
        Self { mode: Mode::UnknownBeta, primal: PrimalKind::Exp3Six }
    }

    pub fn with_primal(mut self, primal: PrimalKind) -> Self {
        self.primal = primal;
        self
    }
}

/// Learning-rate choices made for a run.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Tuning {
    pub nu_tilde: Option<f64>,
    pub dual_eta: Option<f64>,
    pub e_delta: Option<f64>,
    pub e_primal: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    /// Keep aggregates only, no per-round records.
    pub slim: bool,
    pub range_policy: RangePolicy,
}

type Minimizers = (Box<dyn PrimalMinimizer>, Box<dyn DualMinimizer>, Tuning);

fn build(config: &ModeConfig, env: &dyn Environment, params: &ProblemParams) -> Result<Minimizers> {
    let k = env.actions();
    let t = params.horizon();
    let m = params.resources();
    let (range, dual, tuning): (PayoffRange, Box<dyn DualMinimizer>, Tuning) = match config.mode {
        Mode::KnownBeta { beta_tilde } => {
            if !(beta_tilde >= 0.0 && beta_tilde.is_finite()) {
                return Err(Error::InvalidParameter(format!("beta_tilde {beta_tilde} must be >= 0")));
            }
            if let Some(beta) = env.beta() {
                if beta_tilde > beta + 1e-12 {
                    return Err(Error::InvalidParameter(format!(
                        "beta_tilde {beta_tilde} exceeds the environment's beta {beta}"
                    )));
                }
            }
            let nu_tilde = beta_tilde + params.rho();
            if nu_tilde <= 0.0 {
                return Err(Error::InvalidParameter("beta_tilde + rho must be positive".into()));
            }
            let dual = FixedShare::tuned(m, nu_tilde, t)?;
            let tuning = Tuning { nu_tilde: Some(nu_tilde), dual_eta: Some(dual.learning_rate()), ..Tuning::default() };
            (PayoffRange::Unit, Box::new(dual), tuning)
        }
        Mode::UnknownBeta => {
            let e_delta = concentration_radius(t, m, params.delta());
            let kf = k as f64;
            let e_primal = (kf * t as f64 * kf.ln()).sqrt() * (1.0 / params.delta()).ln();
            let eta = compute_eta(t, m, e_delta, e_primal);
            let tuning = Tuning { nu_tilde: None, dual_eta: Some(eta), e_delta: Some(e_delta), e_primal: Some(e_primal) };
            (PayoffRange::Adaptive, Box::new(Ogd::new(m, eta)?), tuning)
        }
    };
    let primal: Box<dyn PrimalMinimizer> = match config.primal {
        PrimalKind::Exp3Six => Box::new(Exp3Six::tuned(k, t, range)?),
        PrimalKind::Hedge => Box::new(Hedge::tuned(k, t, range)?),
        PrimalKind::Fixed { action } => Box::new(FixedAction::new(k, action)?),
    };
    Ok((primal, dual, tuning))
}

/// `B - c`, componentwise.
pub fn budget_step(budget: &[f64], cost: &[f64]) -> Vec<f64> {
    budget.iter().zip(cost).map(|(b, c)| b - c).collect()
}

/// Utility handed to the primal minimizer for a Lagrangian value.
///
/// With a known `beta_tilde` the value is scaled by `nu_tilde / 4` and clamped
/// to `[0, 1]`; otherwise it passes through unchanged.
pub fn primal_feed(mode: &Mode, rho: f64, lagrangian: f64) -> f64 {
    match *mode {
        Mode::KnownBeta { beta_tilde } => (lagrangian * (beta_tilde + rho) / 4.0).clamp(0.0, 1.0),
        Mode::UnknownBeta => lagrangian,
    }
}

/// Runs the primal-dual template for `params.horizon()` rounds.
pub fn run(
    env: &mut dyn Environment,
    config: &ModeConfig,
    params: &ProblemParams,
    seeds: RunSeeds,
    options: &RunOptions,
) -> Result<RunTrace> {
    ensure_len(params.resources(), env.resources())?;
    let (mut primal, mut dual, tuning) = build(config, env, params)?;
    let mut env_rng = ChaCha8Rng::seed_from_u64(seeds.environment);
    let mut alg_rng = ChaCha8Rng::seed_from_u64(seeds.algorithm);
    let mut guard = RangeGuard::new(options.range_policy);

    let horizon = params.horizon();
    let m = params.resources();
    let k = env.actions();
    let rho = params.rho();
    let void = env.void_action();
    let mut trace = RunTrace::start(horizon, k, m, void, params.budget(), options.slim, env.reward_map(), tuning);
    let mut budget = vec![params.budget(); m];
    // Loose sup bound on the Lagrangian over the scaled simplex.
    let feed_bound = tuning.nu_tilde.map(|nu| 1.0 + (1.0 + rho.max(1.0)) / nu);

    for t in 1..=horizon {
        let input = env.next_round(&mut env_rng, &mut guard)?;
        ensure_len(k, input.actions())?;
        let lambda = dual.next();
        let good = budget.iter().all(|&b| b >= 1.0);
        let action = if good {
            let action = primal.next(&mut alg_rng);
            let played = lagrangian_value(input.reward(action), input.cost(action), &lambda.lambda, rho)?;
            if let Some(bound) = feed_bound {
                if options.range_policy == RangePolicy::Strict && !(played.abs() <= bound + 1e-9) {
                    return Err(Error::OutOfRange { what: "lagrangian", value: played, lo: -bound, hi: bound });
                }
            }
            let utility = |a: usize| {
                let value = lagrangian_value(input.reward(a), input.cost(a), &lambda.lambda, rho).unwrap_or(f64::NAN);
                primal_feed(&config.mode, rho, value)
            };
            primal.observe(action, &utility)?;
            dual.observe(&dual_gradient(input.cost(action), rho))?;
            action
        } else {
            void
        };
        let next_budget = budget_step(&budget, input.cost(action));
        if let Some((i, &b)) = next_budget.iter().enumerate().find(|(_, &b)| b < 0.0) {
            return Err(Error::NegativeBudget { round: t, resource: i, value: b });
        }
        trace.record(t, action, &input, &lambda.lambda, &budget, good);
        budget = next_budget;
    }
    trace.finish(budget, guard.warnings(), primal.restarts());
    Ok(trace)
}

#[cfg(test)]
mod tests;
