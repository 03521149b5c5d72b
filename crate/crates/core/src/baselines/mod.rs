//! Offline benchmarks: the best fixed action in hindsight and the optimal
//! budget-feasible strategy mixture for known expected rewards and costs.

use serde::{Deserialize, Serialize};

use crate::environments::{AdversarialScript, Means};
use crate::error::{Error, Result};
use crate::model::{InputPair, Mixture};

mod simplex;

pub use simplex::{LinearProgram, Outcome};

/// Expected reward and cost per action plus the per-round budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpInstance {
    pub f_bar: Vec<f64>,
    /// `K x m`.
    pub c_bar: Vec<Vec<f64>>,
    pub rho: f64,
}

impl LpInstance {
    pub fn new(f_bar: Vec<f64>, c_bar: Vec<Vec<f64>>, rho: f64) -> Result<Self> {
        let inst = Self { f_bar, c_bar, rho };
        inst.validate()?;
        Ok(inst)
    }

    pub fn from_means(means: Means, rho: f64) -> Result<Self> {
        Self::new(means.0, means.1, rho)
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.f_bar.len();
        if k == 0 || self.c_bar.len() != k {
            return Err(Error::InvalidParameter(format!("{k} rewards but {} cost rows", self.c_bar.len())));
        }
        let m = self.c_bar[0].len();
        if m == 0 || self.c_bar.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidParameter("cost rows must share a positive length".into()));
        }
        if self.f_bar.iter().any(|f| !(0.0..=1.0).contains(f)) {
            return Err(Error::InvalidParameter("expected rewards must lie in [0, 1]".into()));
        }
        if self.c_bar.iter().flatten().any(|c| !(-1.0..=1.0).contains(c)) {
            return Err(Error::InvalidParameter("expected costs must lie in [-1, 1]".into()));
        }
        if !(self.rho >= 0.0 && self.rho.is_finite()) {
            return Err(Error::InvalidParameter(format!("rho {} must be >= 0", self.rho)));
        }
        Ok(())
    }

    pub fn actions(&self) -> usize {
        self.f_bar.len()
    }

    pub fn resources(&self) -> usize {
        self.c_bar[0].len()
    }

    /// Expected consumption of each resource under `weights`.
    pub fn consumption(&self, weights: &[f64]) -> Vec<f64> {
        (0..self.resources())
            .map(|i| weights.iter().zip(&self.c_bar).map(|(w, row)| w * row[i]).sum())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub value: f64,
    /// Empty when infeasible.
    pub mixture: Mixture,
    pub status: LpStatus,
}

/// Best fixed unconstrained action on a script: `(argmax, cumulative reward)`,
/// ties broken toward the lowest index.
pub fn opt_adversarial(script: &AdversarialScript) -> (usize, f64) {
    let mut totals = vec![0.0; script.actions()];
    for row in script.rewards() {
        for (t, r) in totals.iter_mut().zip(row) {
            *t += r;
        }
    }
    best_fixed_action(&totals)
}

/// Argmax of per-action cumulative rewards, lowest index on ties.
pub fn best_fixed_action(totals: &[f64]) -> (usize, f64) {
    totals
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, &v)| if v > best.1 { (i, v) } else { best })
}

/// Solves `max_xi f_bar.xi  s.t.  c_bar^T xi <= rho, xi in the simplex`.
///
/// The returned mixture is a basic solution (at most `m + 1` nonzero entries).
/// Optimal mixtures are not unique in general; the first vertex reached under
/// Bland's rule is returned.
pub fn opt_lp(instance: &LpInstance) -> Result<LpSolution> {
    instance.validate()?;
    let k = instance.actions();
    let lp = LinearProgram {
        objective: instance.f_bar.clone(),
        le: (0..instance.resources())
            .map(|i| (instance.c_bar.iter().map(|row| row[i]).collect(), instance.rho))
            .collect(),
        eq: vec![(vec![1.0; k], 1.0)],
    };
    match lp.solve() {
        Outcome::Optimal { x, .. } => {
            let weights: Vec<f64> = x.into_iter().map(|w| w.max(0.0)).collect();
            let value = weights.iter().zip(&instance.f_bar).map(|(w, f)| w * f).sum();
            Ok(LpSolution { value, mixture: Mixture::new(weights, 1e-9)?, status: LpStatus::Optimal })
        }
        Outcome::Infeasible => {
            Ok(LpSolution { value: f64::NAN, mixture: Mixture::new_unchecked(Vec::new()), status: LpStatus::Infeasible })
        }
        Outcome::Unbounded => unreachable!("the simplex constraint keeps the program bounded"),
    }
}

/// Brute-force verifier: best feasible objective over the simplex grid with
/// spacing `step`, or `None` if no grid point is feasible. Exponential in `K`.
pub fn opt_lp_oracle(instance: &LpInstance, step: f64) -> Option<f64> {
    let n = (1.0 / step).round() as usize;
    let k = instance.actions();
    let m = instance.resources();
    let mut best: Option<f64> = None;
    let mut cost = vec![0.0; m];
    // Depth-first enumeration of (n_1, ..., n_K) with sum n.
    fn visit(
        inst: &LpInstance,
        arm: usize,
        remaining: usize,
        n: usize,
        reward: f64,
        cost: &mut [f64],
        best: &mut Option<f64>,
    ) {
        let k = inst.f_bar.len();
        if arm == k - 1 {
            let share = remaining as f64 / n as f64;
            let value = reward + share * inst.f_bar[arm];
            let feasible = cost.iter().zip(&inst.c_bar[arm]).all(|(c, a)| c + share * a <= inst.rho + 1e-12);
            if feasible && best.is_none_or(|b| value > b) {
                *best = Some(value);
            }
            return;
        }
        for units in 0..=remaining {
            let share = units as f64 / n as f64;
            for (c, a) in cost.iter_mut().zip(&inst.c_bar[arm]) {
                *c += share * a;
            }
            visit(inst, arm + 1, remaining - units, n, reward + share * inst.f_bar[arm], cost, best);
            for (c, a) in cost.iter_mut().zip(&inst.c_bar[arm]) {
                *c -= share * a;
            }
        }
    }
    if k == 0 {
        return None;
    }
    visit(instance, 0, n, n, 0.0, &mut cost, &mut best);
    best
}

/// Plug-in estimate of expected rewards and costs from sampled rounds.
pub fn empirical_means(samples: &[InputPair]) -> Result<Means> {
    let first = samples.first().ok_or_else(|| Error::InvalidParameter("no samples".into()))?;
    let (k, m) = (first.actions(), first.resources());
    let mut rewards = vec![0.0; k];
    let mut costs = vec![vec![0.0; m]; k];
    for pair in samples {
        if pair.actions() != k || pair.resources() != m {
            return Err(Error::DimensionMismatch { expected: k * m, got: pair.actions() * pair.resources() });
        }
        for a in 0..k {
            rewards[a] += pair.reward(a);
            for (acc, c) in costs[a].iter_mut().zip(pair.cost(a)) {
                *acc += c;
            }
        }
    }
    let n = samples.len() as f64;
    rewards.iter_mut().for_each(|r| *r /= n);
    costs.iter_mut().flatten().for_each(|c| *c /= n);
    Ok((rewards, costs))
}
