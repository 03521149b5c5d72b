//! Fixtures shared by the benchmarks.

use bwrk_core::baselines::LpInstance;
use bwrk_core::environments::{Noise, StochasticSpec};
use bwrk_core::seed::splitmix64;

/// Four arms, two resources, void replenishing 0.2 per round.
pub fn stochastic_spec() -> StochasticSpec {
    StochasticSpec {
        mean_rewards: vec![0.9, 0.6, 0.4, 0.0],
        mean_costs: vec![vec![0.7, 0.5], vec![0.3, 0.6], vec![0.2, 0.1], vec![-0.2, -0.2]],
        noise: Noise::Bernoulli,
        void_index: 3,
    }
}

fn unit(state: &mut u64) -> f64 {
    *state = splitmix64(*state);
    (*state >> 11) as f64 / (1u64 << 53) as f64
}

/// Deterministic LP with `k` arms and `m` resources; the last arm replenishes.
pub fn lp_instance(k: usize, m: usize, seed: u64) -> LpInstance {
    let mut s = seed;
    let f_bar = (0..k).map(|a| if a + 1 == k { 0.0 } else { unit(&mut s) }).collect();
    let c_bar = (0..k)
        .map(|a| (0..m).map(|_| if a + 1 == k { -0.1 - 0.9 * unit(&mut s) } else { 2.0 * unit(&mut s) - 1.0 }).collect())
        .collect();
    LpInstance::new(f_bar, c_bar, 0.05 + 0.45 * unit(&mut s)).expect("fixture is valid")
}
