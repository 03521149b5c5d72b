use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::driver::ModeConfig;
use crate::environments::{
    adversarial_two_phase, translate_rescale_env, AdversarialScript, BilateralTrade, BilateralTradeSpec, Environment,
    Inventory, InventorySpec, StochasticBwrk, StochasticSpec,
};
use crate::error::{Error, Result};
use crate::model::{ProblemParams, RangePolicy};

fn default_raw_range() -> (f64, f64) {
    (-1.0, 1.0)
}

/// Environment section of an experiment file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnvConfig {
    Stochastic(StochasticSpec),
    /// Script stored in a separate JSON file; relative paths resolve against the
    /// config file's directory.
    Script { path: PathBuf },
    /// Two-phase script regenerated for every horizon.
    TwoPhase { arms: usize, resources: usize, beta: f64 },
    Inventory {
        #[serde(flatten)]
        spec: InventorySpec,
        #[serde(default = "default_raw_range")]
        reward_range: (f64, f64),
    },
    Bilateral {
        #[serde(flatten)]
        spec: BilateralTradeSpec,
        #[serde(default = "default_raw_range")]
        reward_range: (f64, f64),
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetConfig {
    /// `B = rho * T` for every horizon.
    PerRound(f64),
    /// The same initial budget for every horizon.
    Initial(f64),
}

impl BudgetConfig {
    pub fn initial(&self, horizon: usize) -> f64 {
        match *self {
            BudgetConfig::PerRound(rho) => rho * horizon as f64,
            BudgetConfig::Initial(b) => b,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json: Option<PathBuf>,
    /// Directory for per-run trace CSVs (full traces only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_dir: Option<PathBuf>,
}

fn default_delta() -> f64 {
    0.05
}

fn default_replications() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub environment: EnvConfig,
    #[serde(flatten)]
    pub mode: ModeConfig,
    pub budget: BudgetConfig,
    #[serde(default = "default_delta")]
    pub delta: f64,
    pub horizons: Vec<usize>,
    #[serde(default = "default_replications")]
    pub replications: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub slim: bool,
    #[serde(default)]
    pub clamp_out_of_range: bool,
    #[serde(default)]
    pub output: OutputConfig,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    /// Reads a config file and resolves a relative script path against it.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut config = Self::from_json(&std::fs::read_to_string(path)?)?;
        if let EnvConfig::Script { path: script } = &mut config.environment {
            if script.is_relative() {
                if let Some(dir) = path.parent() {
                    *script = dir.join(&*script);
                }
            }
        }
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizons.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("horizons must be strictly increasing".into()));
        }
        if self.horizons.first() == Some(&0) {
            return Err(Error::InvalidParameter("horizons must be positive".into()));
        }
        if self.replications == 0 {
            return Err(Error::InvalidParameter("replications must be >= 1".into()));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(Error::OutOfRange { what: "delta", value: self.delta, lo: 0.0, hi: 1.0 });
        }
        let b = match self.budget {
            BudgetConfig::PerRound(v) | BudgetConfig::Initial(v) => v,
        };
        if !(b >= 0.0 && b.is_finite()) {
            return Err(Error::InvalidParameter(format!("budget {b} must be finite and >= 0")));
        }
        Ok(())
    }

    pub fn range_policy(&self) -> RangePolicy {
        if self.clamp_out_of_range {
            RangePolicy::Clamp
        } else {
            RangePolicy::Strict
        }
    }
}

/// Environment factory with any file or per-horizon preparation done up front.
#[derive(Debug, Clone)]
pub struct PreparedEnv {
    config: EnvConfig,
    scripts: HashMap<usize, Arc<AdversarialScript>>,
    resources: usize,
}

impl PreparedEnv {
    pub fn new(config: &EnvConfig, horizons: &[usize]) -> Result<Self> {
        let mut scripts = HashMap::new();
        let resources = match config {
            EnvConfig::Stochastic(spec) => {
                spec.validate()?;
                spec.resources()
            }
            EnvConfig::Script { path } => {
                let script = Arc::new(AdversarialScript::load(path)?);
                if let Some(&t) = horizons.iter().find(|&&t| t > script.horizon()) {
                    return Err(Error::InvalidParameter(format!(
                        "horizon {t} exceeds the script length {}",
                        script.horizon()
                    )));
                }
                let m = script.resources();
                for &t in horizons {
                    scripts.insert(t, Arc::clone(&script));
                }
                m
            }
            EnvConfig::TwoPhase { arms, resources, beta } => {
                for &t in horizons {
                    scripts.insert(t, Arc::new(adversarial_two_phase(t, *arms, *resources, *beta)?));
                }
                *resources
            }
            EnvConfig::Inventory { spec, .. } => {
                spec.validate()?;
                1
            }
            EnvConfig::Bilateral { spec, .. } => {
                spec.validate()?;
                1
            }
        };
        let prepared = Self { config: config.clone(), scripts, resources };
        if let Some(&t) = horizons.first() {
            prepared.build(t)?;
        }
        Ok(prepared)
    }

    pub fn resources(&self) -> usize {
        self.resources
    }

    /// The script replayed at `horizon`, for script-based environments.
    pub fn script(&self, horizon: usize) -> Option<&Arc<AdversarialScript>> {
        self.scripts.get(&horizon)
    }

    /// Fresh environment for one run of length `horizon`.
    pub fn build(&self, horizon: usize) -> Result<Box<dyn Environment>> {
        Ok(match &self.config {
            EnvConfig::Stochastic(spec) => Box::new(StochasticBwrk::new(spec.clone())?),
            EnvConfig::Script { .. } | EnvConfig::TwoPhase { .. } => {
                let script = self
                    .scripts
                    .get(&horizon)
                    .ok_or_else(|| Error::InvalidParameter(format!("no script prepared for horizon {horizon}")))?;
                Box::new(script.replay())
            }
            EnvConfig::Inventory { spec, reward_range: (lo, hi) } => {
                Box::new(translate_rescale_env(Inventory::new(spec.clone())?, *lo, *hi)?)
            }
            EnvConfig::Bilateral { spec, reward_range: (lo, hi) } => {
                Box::new(translate_rescale_env(BilateralTrade::new(spec.clone())?, *lo, *hi)?)
            }
        })
    }
}

/// Problem parameters of one horizon, with `beta` taken from the environment.
pub fn params_for(config: &ExperimentConfig, env: &dyn Environment, horizon: usize) -> Result<ProblemParams> {
    ProblemParams::new(horizon, env.resources(), config.budget.initial(horizon), env.beta(), config.delta)
}
