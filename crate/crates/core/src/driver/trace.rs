use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{affine_unscale, InputPair};

use super::Tuning;

/// One round of a run. `budget` is the budget at the start of the round and
/// `lambda` the dual iterate available in that round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub t: usize,
    pub action: usize,
    pub reward: f64,
    pub cost: Vec<f64>,
    pub lambda: Vec<f64>,
    pub budget: Vec<f64>,
    pub in_good: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub horizon: usize,
    pub actions: usize,
    pub resources: usize,
    pub void_action: usize,
    pub initial_budget: f64,
    pub slim: bool,
    /// Empty for slim runs.
    pub rounds: Vec<RoundRecord>,
    pub good_rounds: usize,
    pub fallback_rounds: usize,
    /// Last fallback round, 1-based.
    pub tau: Option<usize>,
    /// Largest multiplier norm over rounds where the minimizers were active.
    pub max_multiplier: f64,
    pub min_budget: f64,
    pub final_budget: Vec<f64>,
    pub cumulative_reward: f64,
    /// Per-action reward totals over all rounds, for hindsight baselines.
    pub action_reward_totals: Vec<f64>,
    /// Per-action cost totals, row-major `actions x resources`.
    pub action_cost_totals: Vec<f64>,
    pub warnings: u64,
    pub primal_restarts: u32,
    pub tuning: Tuning,
    /// Set when rewards were mapped from `[lo, hi]` onto `[0, 1]`.
    pub reward_map: Option<(f64, f64)>,
}

impl RunTrace {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn start(
        horizon: usize,
        actions: usize,
        resources: usize,
        void_action: usize,
        initial_budget: f64,
        slim: bool,
        reward_map: Option<(f64, f64)>,
        tuning: Tuning,
    ) -> Self {
        Self {
            horizon,
            actions,
            resources,
            void_action,
            initial_budget,
            slim,
            rounds: if slim { Vec::new() } else { Vec::with_capacity(horizon) },
            good_rounds: 0,
            fallback_rounds: 0,
            tau: None,
            max_multiplier: 0.0,
            min_budget: initial_budget,
            final_budget: Vec::new(),
            cumulative_reward: 0.0,
            action_reward_totals: vec![0.0; actions],
            action_cost_totals: vec![0.0; actions * resources],
            warnings: 0,
            primal_restarts: 0,
            tuning,
            reward_map,
        }
    }

    pub(crate) fn record(&mut self, t: usize, action: usize, input: &InputPair, lambda: &[f64], budget: &[f64], good: bool) {
        if good {
            self.good_rounds += 1;
            self.max_multiplier = self.max_multiplier.max(lambda.iter().map(|x| x.abs()).sum());
        } else {
            self.fallback_rounds += 1;
            self.tau = Some(t);
        }
        let reward = input.reward(action);
        self.cumulative_reward += reward;
        for a in 0..self.actions {
            self.action_reward_totals[a] += input.reward(a);
            for (total, c) in self.action_cost_totals[a * self.resources..(a + 1) * self.resources]
                .iter_mut()
                .zip(input.cost(a))
            {
                *total += c;
            }
        }
        self.min_budget = budget.iter().cloned().fold(self.min_budget, f64::min);
        if !self.slim {
            self.rounds.push(RoundRecord {
                t,
                action,
                reward,
                cost: input.cost(action).to_vec(),
                lambda: lambda.to_vec(),
                budget: budget.to_vec(),
                in_good: good,
            });
        }
    }

    pub(crate) fn finish(&mut self, final_budget: Vec<f64>, warnings: u64, primal_restarts: u32) {
        self.min_budget = final_budget.iter().cloned().fold(self.min_budget, f64::min);
        self.final_budget = final_budget;
        self.warnings = warnings;
        self.primal_restarts = primal_restarts;
    }

    /// Maps a recorded reward back to the environment's original scale.
    pub fn raw_reward(&self, reward: f64) -> f64 {
        match self.reward_map {
            Some((lo, hi)) => affine_unscale(reward, lo, hi),
            None => reward,
        }
    }

    /// Cumulative reward on the environment's original scale.
    pub fn raw_cumulative_reward(&self) -> f64 {
        match self.reward_map {
            Some((lo, hi)) => lo * self.horizon as f64 + (hi - lo) * self.cumulative_reward,
            None => self.cumulative_reward,
        }
    }

    pub fn csv_header(&self) -> Vec<String> {
        let m = self.resources;
        let mut header = vec!["t".to_string(), "action".into(), "reward".into()];
        for prefix in ["cost", "lambda", "budget"] {
            header.extend((1..=m).map(|i| format!("{prefix}_{i}")));
        }
        header.push("in_T_G".into());
        header
    }

    /// One row per round, header first. Floats use the shortest text that
    /// parses back to the same value.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.csv_header()).map_err(csv_err)?;
        for r in &self.rounds {
            let mut row = vec![r.t.to_string(), r.action.to_string(), r.reward.to_string()];
            for v in [&r.cost, &r.lambda, &r.budget] {
                row.extend(v.iter().map(f64::to_string));
            }
            row.push(if r.in_good { "1" } else { "0" }.into());
            w.write_record(&row).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub(crate) fn csv_err(e: csv::Error) -> crate::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => crate::Error::Io(io),
        other => crate::Error::InvalidParameter(format!("csv: {other:?}")),
    }
}
