use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::{BoundedDist, Means, RawEnvironment, Regime};
use crate::error::{Error, Result};

pub const DEFAULT_GRID_POINTS: usize = 21;

/// Sell price of the void pair. Any value above 1 never trades.
pub const VOID_SELL_PRICE: f64 = 1.5;

/// Posted prices: `buy` is offered to the seller, `sell` to the buyer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilateralAction {
    pub buy: f64,
    pub sell: f64,
}

impl BilateralAction {
    pub const VOID: Self = Self { buy: 1.0, sell: VOID_SELL_PRICE };

    /// `(raw revenue, cost)` against realised valuations. The cost is the
    /// negated stock change: a sale depletes, a purchase replenishes.
    pub fn outcome(&self, v: Valuations) -> (f64, f64) {
        let sold = self.sell <= v.buyer;
        let bought = v.seller <= self.buy;
        let revenue = if sold { self.sell } else { 0.0 } - if bought { self.buy } else { 0.0 };
        (revenue, f64::from(u8::from(sold)) - f64::from(u8::from(bought)))
    }
}

/// Private valuations of one round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Valuations {
    pub seller: f64,
    pub buyer: f64,
}

/// Merchant posting a buy and a sell price each round, starting with no stock.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BilateralTradeSpec {
    /// Seller valuation, supported in `[0, 1]`.
    pub seller: BoundedDist,
    /// Buyer valuation, supported in `(0, 1]`.
    pub buyer: BoundedDist,
    /// Prices per side on the uniform grid over `[0, 1]`.
    #[serde(default = "default_grid")]
    pub grid_points: usize,
}

fn default_grid() -> usize {
    DEFAULT_GRID_POINTS
}

impl BilateralTradeSpec {
    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 2 {
            return Err(Error::InvalidParameter("price grid needs at least two points".into()));
        }
        self.seller.validate_within("seller valuation", 0.0, 1.0)?;
        self.buyer.validate_within("buyer valuation", 0.0, 1.0)?;
        let positive = match self.buyer {
            // Uniform draws come from (lo, hi], so lo = 0 is fine.
            BoundedDist::Uniform { .. } => true,
            BoundedDist::Constant { value } => value > 0.0,
            BoundedDist::Bernoulli { lo, hi, p } => (p >= 1.0 || lo > 0.0) && (p <= 0.0 || hi > 0.0),
        };
        if !positive {
            return Err(Error::InvalidParameter("buyer valuation must be strictly positive".into()));
        }
        Ok(())
    }

    /// Grid pairs plus the void pair, which is last.
    pub fn actions(&self) -> usize {
        self.grid_points * self.grid_points + 1
    }

    pub fn void_action(&self) -> usize {
        self.grid_points * self.grid_points
    }

    pub fn action(&self, index: usize) -> Result<BilateralAction> {
        let n = self.grid_points;
        if index == self.void_action() {
            return Ok(BilateralAction::VOID);
        }
        if index > n * n {
            return Err(Error::InvalidParameter(format!("price pair {index} out of range")));
        }
        let step = 1.0 / (n - 1) as f64;
        Ok(BilateralAction { buy: (index / n) as f64 * step, sell: (index % n) as f64 * step })
    }

    pub fn draw(&self, rng: &mut dyn RngCore) -> Valuations {
        Valuations { seller: self.seller.sample(rng), buyer: self.buyer.sample(rng) }
    }

    /// Expected `(revenue, cost)` of a price pair.
    pub fn expected(&self, action: BilateralAction) -> (f64, f64) {
        let p_sell = self.buyer.prob_ge(action.sell);
        let p_buy = self.seller.prob_le(action.buy);
        (action.sell * p_sell - action.buy * p_buy, p_sell - p_buy)
    }
}

/// Draws valuations and evaluates one price pair.
pub fn bilateral_round(spec: &BilateralTradeSpec, rng: &mut dyn RngCore, action: BilateralAction) -> (f64, f64) {
    action.outcome(spec.draw(rng))
}

/// Raw bilateral-trade environment; rewards lie in `[-1, 1]`, one resource (stock).
#[derive(Debug, Clone)]
pub struct BilateralTrade {
    spec: BilateralTradeSpec,
    actions: Vec<BilateralAction>,
}

impl BilateralTrade {
    pub fn new(spec: BilateralTradeSpec) -> Result<Self> {
        spec.validate()?;
        let actions = (0..spec.actions()).map(|i| spec.action(i)).collect::<Result<_>>()?;
        Ok(Self { spec, actions })
    }

    pub fn spec(&self) -> &BilateralTradeSpec {
        &self.spec
    }
}

impl RawEnvironment for BilateralTrade {
    fn actions(&self) -> usize {
        self.actions.len()
    }

    fn resources(&self) -> usize {
        1
    }

    fn void_action(&self) -> usize {
        self.spec.void_action()
    }

    fn beta(&self) -> Option<f64> {
        Some(1.0)
    }

    fn regime(&self) -> Regime {
        Regime::Stochastic
    }

    fn next_raw(&mut self, rng: &mut dyn RngCore) -> (Vec<f64>, Vec<f64>) {
        let v = self.spec.draw(rng);
        self.actions.iter().map(|a| a.outcome(v)).unzip()
    }

    fn expected_raw_means(&self) -> Option<Means> {
        let (rewards, costs): (Vec<f64>, Vec<f64>) = self.actions.iter().map(|&a| self.spec.expected(a)).unzip();
        Some((rewards, costs.into_iter().map(|c| vec![c]).collect()))
    }
}
