use rand::RngCore;

use crate::error::{Error, Result};

use super::{sample_index, share_mix, PayoffRange, PrimalMinimizer};

/// Full-feedback exponential weights with fixed-share mixing, for environments
/// that reveal the whole utility vector each round.
#[derive(Debug, Clone)]
pub struct Hedge {
    weights: Vec<f64>,
    learning_rate: f64,
    share_rate: f64,
    range: PayoffRange,
    scale: f64,
    restarts: u32,
}

impl Hedge {
    pub fn new(actions: usize, learning_rate: f64, share_rate: f64, range: PayoffRange) -> Result<Self> {
        if actions == 0 {
            return Err(Error::InvalidParameter("Hedge needs at least one action".into()));
        }
        if !(learning_rate >= 0.0 && learning_rate.is_finite()) {
            return Err(Error::InvalidParameter(format!("learning rate {learning_rate} must be >= 0")));
        }
        if !(0.0..1.0).contains(&share_rate) {
            return Err(Error::OutOfRange { what: "share rate", value: share_rate, lo: 0.0, hi: 1.0 });
        }
        Ok(Self {
            weights: vec![1.0 / actions as f64; actions],
            learning_rate,
            share_rate,
            range,
            scale: 1.0,
            restarts: 0,
        })
    }

    /// `eta = sqrt(ln(2 K T) / T)`, share rate `1/T`.
    pub fn tuned(actions: usize, horizon: usize, range: PayoffRange) -> Result<Self> {
        let t = horizon as f64;
        let eta = ((2.0 * actions as f64 * t).ln() / t).sqrt();
        Self::new(actions, eta, 1.0 / t, range)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl PrimalMinimizer for Hedge {
    fn actions(&self) -> usize {
        self.weights.len()
    }

    fn next(&mut self, rng: &mut dyn RngCore) -> usize {
        sample_index(&self.weights, rng)
    }

    fn observe(&mut self, _played: usize, utility: &dyn Fn(usize) -> f64) -> Result<()> {
        let utilities: Vec<f64> = (0..self.weights.len()).map(utility).collect();
        if self.range == PayoffRange::Adaptive {
            let top = utilities.iter().fold(0.0f64, |acc, u| acc.max(u.abs()));
            if top > self.scale {
                while top > self.scale {
                    self.scale *= 2.0;
                }
                let n = self.weights.len() as f64;
                self.weights.iter_mut().for_each(|w| *w = 1.0 / n);
                self.restarts += 1;
            }
        }
        let step = self.learning_rate / self.scale;
        let top = utilities.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for (w, u) in self.weights.iter_mut().zip(&utilities) {
            *w *= (step * (u - top)).exp();
        }
        share_mix(&mut self.weights, self.share_rate);
        Ok(())
    }

    fn restarts(&self) -> u32 {
        self.restarts
    }
}
