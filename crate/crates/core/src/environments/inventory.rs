use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::{BoundedDist, Means, RawEnvironment, Regime};
use crate::error::{Error, Result};

/// Open for business: sells from stock.
pub const OPEN: usize = 0;
/// Visit the supplier: restocks at a (non-positive) reward. This is the void action.
pub const SUPPLIER: usize = 1;

/// Single-resource shop that either opens or restocks each day.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InventorySpec {
    /// Reward of opening, supported in `[0, 1]`.
    pub open_reward: BoundedDist,
    /// Units sold when open, supported in `[0, 1]`.
    pub open_cost: BoundedDist,
    /// Reward of restocking, supported in `[-1, 0]`.
    pub supplier_reward: BoundedDist,
    /// Stock change when restocking, supported in `[-1, 0]`.
    pub supplier_cost: BoundedDist,
}

impl InventorySpec {
    pub fn validate(&self) -> Result<()> {
        self.open_reward.validate_within("open reward", 0.0, 1.0)?;
        self.open_cost.validate_within("open cost", 0.0, 1.0)?;
        self.supplier_reward.validate_within("supplier reward", -1.0, 0.0)?;
        self.supplier_cost.validate_within("supplier cost", -1.0, 0.0)?;
        Ok(())
    }

    /// Expected restock per visit, `-E[c(supplier)]`.
    pub fn beta(&self) -> f64 {
        -self.supplier_cost.mean()
    }
}

/// Draws `(raw reward, cost)` for one action.
pub fn inventory_round(spec: &InventorySpec, rng: &mut dyn RngCore, action: usize) -> Result<(f64, f64)> {
    match action {
        OPEN => Ok((spec.open_reward.sample(rng), spec.open_cost.sample(rng))),
        SUPPLIER => Ok((spec.supplier_reward.sample(rng), spec.supplier_cost.sample(rng))),
        _ => Err(Error::InvalidParameter(format!("inventory action {action} is not open (0) or supplier (1)"))),
    }
}

/// Raw inventory environment; rewards lie in `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct Inventory {
    spec: InventorySpec,
}

impl Inventory {
    pub fn new(spec: InventorySpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self { spec })
    }

    pub fn spec(&self) -> &InventorySpec {
        &self.spec
    }
}

impl RawEnvironment for Inventory {
    fn actions(&self) -> usize {
        2
    }

    fn resources(&self) -> usize {
        1
    }

    fn void_action(&self) -> usize {
        SUPPLIER
    }

    fn beta(&self) -> Option<f64> {
        Some(self.spec.beta())
    }

    fn regime(&self) -> Regime {
        Regime::Stochastic
    }

    fn next_raw(&mut self, rng: &mut dyn RngCore) -> (Vec<f64>, Vec<f64>) {
        let s = &self.spec;
        let (ro, co) = (s.open_reward.sample(rng), s.open_cost.sample(rng));
        let (rs, cs) = (s.supplier_reward.sample(rng), s.supplier_cost.sample(rng));
        (vec![ro, rs], vec![co, cs])
    }

    fn expected_raw_means(&self) -> Option<Means> {
        let s = &self.spec;
        Some((
            vec![s.open_reward.mean(), s.supplier_reward.mean()],
            vec![vec![s.open_cost.mean()], vec![s.supplier_cost.mean()]],
        ))
    }
}
