//! Primal and dual regret minimizers.
//!
//! Every minimizer follows the same two-call contract: `next` yields the current
//! decision and `observe` feeds back the utility of the round. Dual minimizers get
//! full feedback (the gradient of a linear utility); primal minimizers receive a
//! utility oracle but bandit ones only ever query it at the played action.

use rand::RngCore;

use crate::error::Result;
use crate::model::DualIterate;

mod exp3six;
mod fixed_share;
mod hedge;
mod ogd;

pub use exp3six::{Exp3Six, Exp3SixParams};
pub use fixed_share::FixedShare;
pub use hedge::Hedge;
pub use ogd::{compute_eta, Ogd};

/// Full-feedback minimizer over Lagrange multipliers. Utilities are linear,
/// `lambda -> <lambda, gradient>`, and the minimizer maximizes them.
pub trait DualMinimizer: Send {
    fn next(&self) -> DualIterate;
    fn observe(&mut self, gradient: &[f64]) -> Result<()>;
}

/// Minimizer over a finite action set.
pub trait PrimalMinimizer: Send {
    fn actions(&self) -> usize;

    fn next(&mut self, rng: &mut dyn RngCore) -> usize;

    /// `utility(a)` is the utility action `a` would have earned this round.
    /// Bandit minimizers call it for `played` only.
    fn observe(&mut self, played: usize, utility: &dyn Fn(usize) -> f64) -> Result<()>;

    /// Number of range-doubling restarts so far.
    fn restarts(&self) -> u32 {
        0
    }
}

/// How a primal minimizer interprets the utilities it is fed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PayoffRange {
    /// Utilities already lie in `[0, 1]`.
    Unit,
    /// Range unknown: keep an estimate `L` of `max |u|`, double it and restart
    /// whenever a larger payoff shows up.
    Adaptive,
}

/// Always plays the same action. Useful as a reference policy.
#[derive(Debug, Clone)]
pub struct FixedAction {
    actions: usize,
    action: usize,
}

impl FixedAction {
    pub fn new(actions: usize, action: usize) -> Result<Self> {
        if action >= actions {
            return Err(crate::Error::InvalidParameter(format!(
                "fixed action {action} out of range for {actions} actions"
            )));
        }
        Ok(Self { actions, action })
    }
}

impl PrimalMinimizer for FixedAction {
    fn actions(&self) -> usize {
        self.actions
    }

    fn next(&mut self, _rng: &mut dyn RngCore) -> usize {
        self.action
    }

    fn observe(&mut self, _played: usize, _utility: &dyn Fn(usize) -> f64) -> Result<()> {
        Ok(())
    }
}

/// Normalizes `weights` in place and mixes a `share` fraction toward uniform.
pub(crate) fn share_mix(weights: &mut [f64], share: f64) {
    let total: f64 = weights.iter().sum();
    let floor = share / weights.len() as f64;
    for w in weights.iter_mut() {
        *w = (1.0 - share) * (*w / total) + floor;
    }
    // The mix preserves the total only up to rounding.
    let total: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= total;
    }
}

/// Inverse-CDF sampling from a probability vector.
pub(crate) fn sample_index(probs: &[f64], rng: &mut dyn RngCore) -> usize {
    let u: f64 = rand::Rng::random(rng);
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    // Rounding can leave `acc` a hair below 1; fall back to the last positive entry.
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(probs.len() - 1)
}
