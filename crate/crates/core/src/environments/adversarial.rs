use std::path::Path;
use std::sync::Arc;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::{Environment, Regime};
use crate::error::{Error, Result};
use crate::model::{InputPair, RangeGuard};

/// A fully materialised oblivious-adversary input sequence.
///
/// The void action is the last column. On disk this is JSON with fields
/// `T`, `K`, `m`, `beta`, `rewards` (`T x K`) and `costs` (`T x K x m`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdversarialScript {
    #[serde(rename = "T")]
    horizon: usize,
    #[serde(rename = "K")]
    actions: usize,
    m: usize,
    beta: f64,
    rewards: Vec<Vec<f64>>,
    costs: Vec<Vec<Vec<f64>>>,
}

impl AdversarialScript {
    pub fn new(beta: f64, rewards: Vec<Vec<f64>>, costs: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let horizon = rewards.len();
        let actions = rewards.first().map_or(0, Vec::len);
        let m = costs.first().and_then(|r| r.first()).map_or(0, Vec::len);
        let script = Self { horizon, actions, m, beta, rewards, costs };
        script.validate()?;
        Ok(script)
    }

    /// Checks shapes, ranges, and that the void column replenishes at least
    /// `beta` on every resource in every round.
    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 || self.actions == 0 || self.m == 0 {
            return Err(Error::InvalidParameter("script needs T, K, m >= 1".into()));
        }
        if !(self.beta >= 0.0 && self.beta <= 1.0) {
            return Err(Error::OutOfRange { what: "beta", value: self.beta, lo: 0.0, hi: 1.0 });
        }
        if self.rewards.len() != self.horizon || self.costs.len() != self.horizon {
            return Err(Error::InvalidParameter(format!("script must have exactly T = {} rows", self.horizon)));
        }
        let void = self.actions - 1;
        for (t, (rewards, costs)) in self.rewards.iter().zip(&self.costs).enumerate() {
            if rewards.len() != self.actions || costs.len() != self.actions {
                return Err(Error::InvalidParameter(format!("round {} does not have K = {} actions", t + 1, self.actions)));
            }
            if rewards.iter().any(|r| !(0.0..=1.0).contains(r)) {
                return Err(Error::InvalidParameter(format!("round {} has a reward outside [0, 1]", t + 1)));
            }
            for row in costs {
                if row.len() != self.m || row.iter().any(|c| !(-1.0..=1.0).contains(c)) {
                    return Err(Error::InvalidParameter(format!("round {} has a malformed cost vector", t + 1)));
                }
            }
            if let Some((i, c)) = costs[void].iter().enumerate().find(|(_, &c)| c > -self.beta) {
                return Err(Error::VoidAssumption(format!(
                    "round {}: void cost {c} on resource {} exceeds -beta = {}",
                    t + 1,
                    i + 1,
                    -self.beta
                )));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let script: Self = serde_json::from_str(text)?;
        script.validate()?;
        Ok(script)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn actions(&self) -> usize {
        self.actions
    }

    pub fn resources(&self) -> usize {
        self.m
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn void_action(&self) -> usize {
        self.actions - 1
    }

    pub fn rewards(&self) -> &[Vec<f64>] {
        &self.rewards
    }

    pub fn costs(&self) -> &[Vec<Vec<f64>>] {
        &self.costs
    }

    pub fn round(&self, t: usize) -> Result<InputPair> {
        InputPair::from_rows(self.rewards[t].clone(), &self.costs[t])
    }

    pub fn replay(self: &Arc<Self>) -> ScriptReplay {
        ScriptReplay { script: Arc::clone(self), cursor: 0 }
    }
}

/// Two-phase stress script: in the first half arm 0 pays 1 and costs 1 on every
/// resource, in the second half arm `1 % arms` does. Every other non-void arm
/// yields `(0, 0)`; the void arm (index `arms`) always yields `(0, -beta)`.
pub fn adversarial_two_phase(horizon: usize, arms: usize, resources: usize, beta: f64) -> Result<AdversarialScript> {
    if horizon == 0 || !horizon.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("two-phase script needs an even horizon, got {horizon}")));
    }
    if arms == 0 || resources == 0 {
        return Err(Error::InvalidParameter("two-phase script needs arms >= 1 and resources >= 1".into()));
    }
    let mut rewards = Vec::with_capacity(horizon);
    let mut costs = Vec::with_capacity(horizon);
    for t in 0..horizon {
        let good = if t < horizon / 2 { 0 } else { 1 % arms };
        let mut r = vec![0.0; arms + 1];
        let mut c = vec![vec![0.0; resources]; arms + 1];
        r[good] = 1.0;
        c[good] = vec![1.0; resources];
        c[arms] = vec![-beta; resources];
        rewards.push(r);
        costs.push(c);
    }
    AdversarialScript::new(beta, rewards, costs)
}

/// Replays a script round by round.
#[derive(Debug, Clone)]
pub struct ScriptReplay {
    script: Arc<AdversarialScript>,
    cursor: usize,
}

impl Environment for ScriptReplay {
    fn actions(&self) -> usize {
        self.script.actions
    }

    fn resources(&self) -> usize {
        self.script.m
    }

    fn void_action(&self) -> usize {
        self.script.void_action()
    }

    fn beta(&self) -> Option<f64> {
        Some(self.script.beta)
    }

    fn regime(&self) -> Regime {
        Regime::Adversarial
    }

    fn next_round(&mut self, _rng: &mut dyn RngCore, _guard: &mut RangeGuard) -> Result<InputPair> {
        if self.cursor >= self.script.horizon {
            return Err(Error::EnvironmentExhausted { rounds: self.cursor, horizon: self.script.horizon });
        }
        let pair = self.script.round(self.cursor)?;
        self.cursor += 1;
        Ok(pair)
    }
}
