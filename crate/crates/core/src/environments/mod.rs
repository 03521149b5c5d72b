//! Input generators. Every environment emits a full [`InputPair`] per round;
//! the driver only reveals the played action's entries to the learner.

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{InputPair, RangeGuard};

mod adversarial;
mod bilateral;
mod inventory;
mod stochastic;

pub use adversarial::{adversarial_two_phase, AdversarialScript, ScriptReplay};
pub use bilateral::{
    bilateral_round, BilateralAction, BilateralTrade, BilateralTradeSpec, Valuations, DEFAULT_GRID_POINTS,
    VOID_SELL_PRICE,
};
pub use inventory::{inventory_round, Inventory, InventorySpec, OPEN, SUPPLIER};
pub use stochastic::{stochastic_round, Noise, StochasticBwrk, StochasticSpec};

/// Input model of an environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Stochastic,
    Adversarial,
}

/// Expected reward per action and expected cost row per action.
pub type Means = (Vec<f64>, Vec<Vec<f64>>);

pub trait Environment: Send {
    fn actions(&self) -> usize;
    fn resources(&self) -> usize;
    fn void_action(&self) -> usize;
    /// Replenishment factor of the void action, when the environment knows it.
    fn beta(&self) -> Option<f64>;
    fn regime(&self) -> Regime;
    fn next_round(&mut self, rng: &mut dyn RngCore, guard: &mut RangeGuard) -> Result<InputPair>;

    /// Exact expected rewards and costs, for environments that can compute them.
    fn expected_means(&self) -> Option<Means> {
        None
    }

    /// `(lo, hi)` when rewards were affinely mapped from `[lo, hi]` onto `[0, 1]`.
    fn reward_map(&self) -> Option<(f64, f64)> {
        None
    }
}

/// Environment whose rewards may leave `[0, 1]`; it must be wrapped with
/// [`translate_rescale_env`] before a learner can use it.
pub trait RawEnvironment: Send {
    fn actions(&self) -> usize;
    fn resources(&self) -> usize;
    fn void_action(&self) -> usize;
    fn beta(&self) -> Option<f64>;
    fn regime(&self) -> Regime;
    /// Rewards (one per action) and row-major costs (`actions * resources`).
    fn next_raw(&mut self, rng: &mut dyn RngCore) -> (Vec<f64>, Vec<f64>);
    fn expected_raw_means(&self) -> Option<Means> {
        None
    }
}

/// A raw environment with rewards mapped from `[lo, hi]` onto `[0, 1]`.
#[derive(Debug, Clone)]
pub struct Rescaled<E> {
    inner: E,
    lo: f64,
    hi: f64,
}

impl<E> Rescaled<E> {
    pub fn inner(&self) -> &E {
        &self.inner
    }

    pub fn range(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }
}

/// Wraps a stochastic raw environment so that its rewards land in `[0, 1]`.
///
/// Adversarial inputs are refused: the multiplicative guarantee is not invariant
/// under translation.
pub fn translate_rescale_env<E: RawEnvironment>(env: E, lo: f64, hi: f64) -> Result<Rescaled<E>> {
    if env.regime() == Regime::Adversarial {
        return Err(Error::AdversarialRescale);
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidParameter(format!("rescale interval [{lo}, {hi}] is empty")));
    }
    Ok(Rescaled { inner: env, lo, hi })
}

impl<E: RawEnvironment> Environment for Rescaled<E> {
    fn actions(&self) -> usize {
        self.inner.actions()
    }

    fn resources(&self) -> usize {
        self.inner.resources()
    }

    fn void_action(&self) -> usize {
        self.inner.void_action()
    }

    fn beta(&self) -> Option<f64> {
        self.inner.beta()
    }

    fn regime(&self) -> Regime {
        self.inner.regime()
    }

    fn next_round(&mut self, rng: &mut dyn RngCore, guard: &mut RangeGuard) -> Result<InputPair> {
        let (raw, costs) = self.inner.next_raw(rng);
        let rewards = raw
            .into_iter()
            .map(|r| guard.rescale(r, self.lo, self.hi))
            .collect::<Result<Vec<_>>>()?;
        InputPair::guarded(rewards, costs, self.inner.resources(), guard)
    }

    fn expected_means(&self) -> Option<Means> {
        let (rewards, costs) = self.inner.expected_raw_means()?;
        let width = self.hi - self.lo;
        Some((rewards.into_iter().map(|r| (r - self.lo) / width).collect(), costs))
    }

    fn reward_map(&self) -> Option<(f64, f64)> {
        Some((self.lo, self.hi))
    }
}

/// Bounded scalar distributions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundedDist {
    Constant { value: f64 },
    /// Continuous uniform on `(lo, hi]`.
    Uniform { lo: f64, hi: f64 },
    /// `hi` with probability `p`, otherwise `lo`.
    Bernoulli { lo: f64, hi: f64, p: f64 },
}

impl BoundedDist {
    pub fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        match *self {
            BoundedDist::Constant { value } => value,
            BoundedDist::Uniform { lo, hi } => hi - (hi - lo) * rng.random::<f64>(),
            BoundedDist::Bernoulli { lo, hi, p } => {
                if rng.random::<f64>() < p {
                    hi
                } else {
                    lo
                }
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            BoundedDist::Constant { value } => value,
            BoundedDist::Uniform { lo, hi } => 0.5 * (lo + hi),
            BoundedDist::Bernoulli { lo, hi, p } => lo + p * (hi - lo),
        }
    }

    /// Smallest and largest value the distribution can produce.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            BoundedDist::Constant { value } => (value, value),
            BoundedDist::Uniform { lo, hi } => (lo, hi),
            BoundedDist::Bernoulli { lo, hi, p } => {
                if p <= 0.0 {
                    (lo, lo)
                } else if p >= 1.0 {
                    (hi, hi)
                } else {
                    (lo, hi)
                }
            }
        }
    }

    /// `P(X <= x)`.
    pub fn prob_le(&self, x: f64) -> f64 {
        match *self {
            BoundedDist::Constant { value } => f64::from(u8::from(value <= x)),
            BoundedDist::Uniform { lo, hi } => ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
            BoundedDist::Bernoulli { lo, hi, p } => {
                if x >= hi {
                    1.0
                } else if x >= lo {
                    1.0 - p
                } else {
                    0.0
                }
            }
        }
    }

    /// `P(X >= x)`.
    pub fn prob_ge(&self, x: f64) -> f64 {
        match *self {
            BoundedDist::Constant { value } => f64::from(u8::from(value >= x)),
            // Continuous: P(X >= x) = 1 - P(X <= x).
            BoundedDist::Uniform { .. } => 1.0 - self.prob_le(x),
            BoundedDist::Bernoulli { lo, hi, p } => {
                if x <= lo {
                    1.0
                } else if x <= hi {
                    p
                } else {
                    0.0
                }
            }
        }
    }

    /// Checks parameters and that the support fits inside `[lo, hi]`.
    pub fn validate_within(&self, what: &str, lo: f64, hi: f64) -> Result<()> {
        let ok = match *self {
            BoundedDist::Constant { value } => value.is_finite(),
            BoundedDist::Uniform { lo, hi } => lo.is_finite() && hi.is_finite() && lo < hi,
            BoundedDist::Bernoulli { lo, hi, p } => {
                lo.is_finite() && hi.is_finite() && lo <= hi && (0.0..=1.0).contains(&p)
            }
        };
        let (a, b) = self.support();
        if ok && a >= lo && b <= hi {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("{what} distribution {self:?} must lie in [{lo}, {hi}]")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    struct ScriptedRaw;

    impl RawEnvironment for ScriptedRaw {
        fn actions(&self) -> usize {
            2
        }
        fn resources(&self) -> usize {
            1
        }
        fn void_action(&self) -> usize {
            1
        }
        fn beta(&self) -> Option<f64> {
            Some(0.0)
        }
        fn regime(&self) -> Regime {
            Regime::Adversarial
        }
        fn next_raw(&mut self, _rng: &mut dyn RngCore) -> (Vec<f64>, Vec<f64>) {
            (vec![-1.0, 1.0], vec![0.5, 0.0])
        }
    }

    #[test]
    fn rescale_refuses_adversarial_inputs() {
        assert!(matches!(translate_rescale_env(ScriptedRaw, -1.0, 1.0), Err(Error::AdversarialRescale)));
    }

    #[test]
    fn uniform_and_bernoulli_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = BoundedDist::Uniform { lo: 0.0, hi: 1.0 };
        let b = BoundedDist::Bernoulli { lo: -1.0, hi: 0.0, p: 0.3 };
        let n = 100_000;
        let mu: f64 = (0..n).map(|_| u.sample(&mut rng)).sum::<f64>() / n as f64;
        let mb: f64 = (0..n).map(|_| b.sample(&mut rng)).sum::<f64>() / n as f64;
        assert!((mu - 0.5).abs() < 0.01);
        assert!((mb - b.mean()).abs() < 0.01);
        assert!((b.mean() + 0.7).abs() < 1e-12);
    }

    #[test]
    fn uniform_samples_exclude_lower_endpoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let u = BoundedDist::Uniform { lo: 0.0, hi: 1.0 };
        assert!((0..10_000).all(|_| u.sample(&mut rng) > 0.0));
    }

    #[test]
    fn cdf_helpers() {
        let u = BoundedDist::Uniform { lo: 0.0, hi: 1.0 };
        assert!((u.prob_le(0.3) - 0.3).abs() < 1e-15);
        assert!((u.prob_ge(0.3) - 0.7).abs() < 1e-15);
        let c = BoundedDist::Constant { value: 0.4 };
        assert_eq!(c.prob_le(0.4), 1.0);
        assert_eq!(c.prob_ge(0.41), 0.0);
        let b = BoundedDist::Bernoulli { lo: 0.2, hi: 0.8, p: 0.25 };
        assert_eq!(b.prob_le(0.5), 0.75);
        assert_eq!(b.prob_ge(0.5), 0.25);
        assert_eq!(b.prob_ge(0.2), 1.0);
    }

    #[test]
    fn validation_checks_support() {
        assert!(BoundedDist::Uniform { lo: -0.5, hi: 0.5 }.validate_within("x", 0.0, 1.0).is_err());
        assert!(BoundedDist::Uniform { lo: 0.5, hi: 0.5 }.validate_within("x", 0.0, 1.0).is_err());
        assert!(BoundedDist::Bernoulli { lo: 0.0, hi: 1.0, p: 1.5 }.validate_within("x", 0.0, 1.0).is_err());
        assert!(BoundedDist::Constant { value: 0.5 }.validate_within("x", 0.0, 1.0).is_ok());
    }
}
