use std::sync::Arc;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::{Environment, Means, Regime};
use crate::error::{Error, Result};
use crate::model::{InputPair, RangeGuard};

/// Per-entry noise around the declared means. Every family keeps the mean exact
/// and the draw inside the declared range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Noise {
    None,
    /// Uniform on `mean +- w`, with `w` shrunk symmetrically to fit the range.
    Uniform { half_width: f64 },
    /// Two-point on the range endpoints with the matching success probability.
    Bernoulli,
}

impl Noise {
    fn draw(&self, mean: f64, lo: f64, hi: f64, rng: &mut dyn RngCore) -> f64 {
        match *self {
            Noise::None => mean,
            Noise::Uniform { half_width } => {
                let w = half_width.min(mean - lo).min(hi - mean);
                mean + w * (2.0 * rng.random::<f64>() - 1.0)
            }
            Noise::Bernoulli => {
                if rng.random::<f64>() < (mean - lo) / (hi - lo) {
                    hi
                } else {
                    lo
                }
            }
        }
    }
}

/// I.i.d. bandits-with-replenishable-knapsacks instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StochasticSpec {
    pub mean_rewards: Vec<f64>,
    /// One row of `m` expected costs per arm.
    pub mean_costs: Vec<Vec<f64>>,
    pub noise: Noise,
    pub void_index: usize,
}

impl StochasticSpec {
    pub fn validate(&self) -> Result<()> {
        let k = self.mean_rewards.len();
        if k == 0 || self.mean_costs.len() != k {
            return Err(Error::InvalidParameter(format!(
                "{k} reward means but {} cost rows",
                self.mean_costs.len()
            )));
        }
        let m = self.mean_costs[0].len();
        if m == 0 || self.mean_costs.iter().any(|row| row.len() != m) {
            return Err(Error::InvalidParameter("cost rows must share a positive length".into()));
        }
        if self.mean_rewards.iter().any(|r| !(0.0..=1.0).contains(r)) {
            return Err(Error::InvalidParameter("mean rewards must lie in [0, 1]".into()));
        }
        if self.mean_costs.iter().flatten().any(|c| !(-1.0..=1.0).contains(c)) {
            return Err(Error::InvalidParameter("mean costs must lie in [-1, 1]".into()));
        }
        if let Noise::Uniform { half_width } = self.noise {
            if !(half_width >= 0.0 && half_width.is_finite()) {
                return Err(Error::InvalidParameter("noise half width must be >= 0".into()));
            }
        }
        if self.void_index >= k {
            return Err(Error::InvalidParameter(format!("void index {} out of range", self.void_index)));
        }
        if self.mean_costs[self.void_index].iter().any(|&c| c > 0.0) {
            return Err(Error::VoidAssumption("void arm must not deplete any resource in expectation".into()));
        }
        Ok(())
    }

    pub fn actions(&self) -> usize {
        self.mean_rewards.len()
    }

    pub fn resources(&self) -> usize {
        self.mean_costs[0].len()
    }

    /// Largest `beta` with `E[c_i(void)] <= -beta` for every resource.
    pub fn beta(&self) -> f64 {
        let worst = self.mean_costs[self.void_index].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (-worst).max(0.0)
    }
}

/// One i.i.d. draw of every arm's reward and cost vector.
pub fn stochastic_round(spec: &StochasticSpec, rng: &mut dyn RngCore, guard: &mut RangeGuard) -> Result<InputPair> {
    let rewards = spec.mean_rewards.iter().map(|&mu| spec.noise.draw(mu, 0.0, 1.0, rng)).collect();
    // The void arm must never deplete, so its draws stay in [-1, 0].
    let mut costs = Vec::with_capacity(spec.actions() * spec.resources());
    for (a, row) in spec.mean_costs.iter().enumerate() {
        let hi = if a == spec.void_index { 0.0 } else { 1.0 };
        costs.extend(row.iter().map(|&mu| spec.noise.draw(mu, -1.0, hi, rng)));
    }
    InputPair::guarded(rewards, costs, spec.resources(), guard)
}

/// [`Environment`] drawing rounds from a shared [`StochasticSpec`].
#[derive(Debug, Clone)]
pub struct StochasticBwrk {
    spec: Arc<StochasticSpec>,
}

impl StochasticBwrk {
    pub fn new(spec: StochasticSpec) -> Result<Self> {
        Self::shared(Arc::new(spec))
    }

    pub fn shared(spec: Arc<StochasticSpec>) -> Result<Self> {
        spec.validate()?;
        Ok(Self { spec })
    }

    pub fn spec(&self) -> &StochasticSpec {
        &self.spec
    }
}

impl Environment for StochasticBwrk {
    fn actions(&self) -> usize {
        self.spec.actions()
    }

    fn resources(&self) -> usize {
        self.spec.resources()
    }

    fn void_action(&self) -> usize {
        self.spec.void_index
    }

    fn beta(&self) -> Option<f64> {
        Some(self.spec.beta())
    }

    fn regime(&self) -> Regime {
        Regime::Stochastic
    }

    fn next_round(&mut self, rng: &mut dyn RngCore, guard: &mut RangeGuard) -> Result<InputPair> {
        stochastic_round(&self.spec, rng, guard)
    }

    fn expected_means(&self) -> Option<Means> {
        Some((self.spec.mean_rewards.clone(), self.spec.mean_costs.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spec(noise: Noise) -> StochasticSpec {
        StochasticSpec {
            mean_rewards: vec![0.9, 0.3, 0.0],
            mean_costs: vec![vec![0.8, 0.1], vec![0.2, 0.6], vec![-0.5, -0.25]],
            noise,
            void_index: 2,
        }
    }

    #[test]
    fn zero_noise_reproduces_means() {
        let s = spec(Noise::None);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut guard = RangeGuard::default();
        for _ in 0..10 {
            let pair = stochastic_round(&s, &mut rng, &mut guard).unwrap();
            assert_eq!(pair.rewards(), &s.mean_rewards[..]);
            for (a, row) in s.mean_costs.iter().enumerate() {
                assert_eq!(pair.cost(a), &row[..]);
            }
        }
    }

    #[test]
    fn bernoulli_void_cost_mean_by_monte_carlo() {
        let s = spec(Noise::Bernoulli);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut guard = RangeGuard::default();
        let n = 100_000;
        let mut total = 0.0;
        for _ in 0..n {
            let pair = stochastic_round(&s, &mut rng, &mut guard).unwrap();
            let c = pair.cost(2)[0];
            assert!(c == -1.0 || c == 0.0);
            total += c;
        }
        assert!((total / n as f64 + 0.5).abs() < 0.01);
    }

    #[test]
    fn seeded_streams_are_identical() {
        let s = spec(Noise::Uniform { half_width: 0.2 });
        let mut guard = RangeGuard::default();
        let mut a = ChaCha8Rng::seed_from_u64(5);
        let mut b = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            assert_eq!(
                stochastic_round(&s, &mut a, &mut guard).unwrap(),
                stochastic_round(&s, &mut b, &mut guard).unwrap()
            );
        }
    }

    #[test]
    fn uniform_noise_is_shrunk_to_keep_mean() {
        let s = StochasticSpec {
            mean_rewards: vec![0.95],
            mean_costs: vec![vec![-0.9]],
            noise: Noise::Uniform { half_width: 0.5 },
            void_index: 0,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut guard = RangeGuard::default();
        let n = 50_000;
        let (mut r, mut c) = (0.0, 0.0);
        for _ in 0..n {
            let pair = stochastic_round(&s, &mut rng, &mut guard).unwrap();
            r += pair.reward(0);
            c += pair.cost(0)[0];
        }
        assert!((r / n as f64 - 0.95).abs() < 0.005);
        assert!((c / n as f64 + 0.9).abs() < 0.005);
    }

    #[test]
    fn beta_is_weakest_void_replenishment() {
        assert!((spec(Noise::None).beta() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        let mut s = spec(Noise::None);
        s.mean_costs[2][0] = 0.1;
        assert!(matches!(s.validate(), Err(Error::VoidAssumption(_))));
        let mut s = spec(Noise::None);
        s.void_index = 9;
        assert!(s.validate().is_err());
        let mut s = spec(Noise::None);
        s.mean_rewards[0] = 1.5;
        assert!(s.validate().is_err());
    }
}
