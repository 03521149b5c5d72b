use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{alpha, ProblemParams};

use super::RunTrace;

/// Offline benchmark values for a run.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Baseline {
    /// Total reward of the best fixed action over the horizon. Falls back to the
    /// hindsight value recorded in the trace when absent.
    pub opt_gamma: Option<f64>,
    /// Per-round value of the expected LP.
    pub opt_lp: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretReport {
    pub horizon: usize,
    pub cumulative_reward: f64,
    pub alpha: Option<f64>,
    pub opt_gamma: f64,
    pub adversarial_gap: Option<f64>,
    pub opt_lp: Option<f64>,
    pub stochastic_gap: Option<f64>,
    pub max_multiplier: f64,
    /// `8 m / nu`, when `beta` is known.
    pub multiplier_bound: Option<f64>,
    pub fallback_rounds: usize,
    pub tau: Option<usize>,
    pub min_budget: f64,
    pub final_budget: Vec<f64>,
}

pub fn regret_report(trace: &RunTrace, baseline: &Baseline, params: &ProblemParams) -> RegretReport {
    let reward = trace.cumulative_reward;
    let opt_gamma = baseline
        .opt_gamma
        .unwrap_or_else(|| trace.action_reward_totals.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
    let a = params.beta().and_then(|b| alpha(b, params.rho()).ok());
    let t = trace.horizon as f64;
    RegretReport {
        horizon: trace.horizon,
        cumulative_reward: reward,
        alpha: a,
        opt_gamma,
        adversarial_gap: a.map(|a| a * opt_gamma - reward),
        opt_lp: baseline.opt_lp,
        stochastic_gap: baseline.opt_lp.map(|v| t * v - reward),
        max_multiplier: trace.max_multiplier,
        multiplier_bound: params.nu().filter(|&nu| nu > 0.0).map(|nu| 8.0 * params.resources() as f64 / nu),
        fallback_rounds: trace.fallback_rounds,
        tau: trace.tau,
        min_budget: trace.min_budget,
        final_budget: trace.final_budget.clone(),
    }
}

/// Dual regret on the active rounds before and after the last fallback round,
/// measured against the vertices `{0} U {radius * e_i}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentRegret {
    pub before_tau: f64,
    pub after_tau: f64,
}

pub fn dual_segment_regret(trace: &RunTrace, rho: f64, radius: f64) -> Result<SegmentRegret> {
    if trace.slim {
        return Err(Error::InvalidParameter("segment regret needs a full trace".into()));
    }
    let m = trace.resources;
    let tau = trace.tau.unwrap_or(0);
    let segment = |before: bool| {
        let mut realized = 0.0;
        let mut sums = vec![0.0; m];
        for r in trace.rounds.iter().filter(|r| r.in_good && (r.t < tau) == before) {
            for i in 0..m {
                let g = r.cost[i] - rho;
                realized += r.lambda[i] * g;
                sums[i] += g;
            }
        }
        let best = sums.iter().fold(0.0f64, |acc, s| acc.max(radius * s));
        best - realized
    };
    Ok(SegmentRegret { before_tau: segment(true), after_tau: segment(false) })
}
