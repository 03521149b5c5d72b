use crate::error::{ensure_len, Error, Result};
use crate::model::{DualDomain, DualIterate};

use super::{share_mix, DualMinimizer};

/// Fixed-share exponential weights over the vertices `{0, e_1/nu, ..., e_m/nu}`
/// of the scaled simplex `{lambda >= 0 : ||lambda||_1 <= 1/nu}`.
///
/// The emitted multiplier is the weight-average of the vertices, so it always
/// stays inside the scaled simplex. Weight 0 belongs to the origin.
#[derive(Debug, Clone)]
pub struct FixedShare {
    weights: Vec<f64>,
    learning_rate: f64,
    share_rate: f64,
    nu_tilde: f64,
}

impl FixedShare {
    /// `learning_rate` multiplies the raw vertex utilities `<v, g>`.
    pub fn new(resources: usize, nu_tilde: f64, learning_rate: f64, share_rate: f64) -> Result<Self> {
        let n = resources + 1;
        Self::with_weights(vec![1.0 / n as f64; n], nu_tilde, learning_rate, share_rate)
    }

    /// Learning rate `nu * sqrt(ln(2 m T) / T)` and share rate `1/T`.
    pub fn tuned(resources: usize, nu_tilde: f64, horizon: usize) -> Result<Self> {
        let t = horizon as f64;
        let eta = nu_tilde * ((2.0 * resources as f64 * t).ln() / t).sqrt();
        Self::new(resources, nu_tilde, eta, 1.0 / t)
    }

    pub fn with_weights(
        weights: Vec<f64>,
        nu_tilde: f64,
        learning_rate: f64,
        share_rate: f64,
    ) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::InvalidParameter("fixed share needs at least one resource".into()));
        }
        if !(nu_tilde > 0.0 && nu_tilde.is_finite()) {
            return Err(Error::InvalidParameter(format!("nu_tilde {nu_tilde} must be positive")));
        }
        if !(learning_rate > 0.0 && learning_rate.is_finite()) {
            return Err(Error::InvalidParameter(format!("learning rate {learning_rate} must be positive")));
        }
        if !(0.0..1.0).contains(&share_rate) {
            return Err(Error::OutOfRange { what: "share rate", value: share_rate, lo: 0.0, hi: 1.0 });
        }
        let total: f64 = weights.iter().sum();
        if weights.iter().any(|&w| !(w >= 0.0)) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter("fixed-share weights must be a distribution".into()));
        }
        Ok(Self { weights, learning_rate, share_rate, nu_tilde })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn learning_rate(&self) -> f64 {
        self.learning_rate
    }

    pub fn share_rate(&self) -> f64 {
        self.share_rate
    }

    pub fn nu_tilde(&self) -> f64 {
        self.nu_tilde
    }
}

impl DualMinimizer for FixedShare {
    fn next(&self) -> DualIterate {
        DualIterate {
            lambda: self.weights[1..].iter().map(|w| w / self.nu_tilde).collect(),
            domain: DualDomain::SimplexScaled { nu_tilde: self.nu_tilde },
        }
    }

    fn observe(&mut self, gradient: &[f64]) -> Result<()> {
        ensure_len(self.weights.len() - 1, gradient.len())?;
        // Vertex utilities: 0 for the origin, g_i / nu for e_i / nu.
        let scale = self.learning_rate / self.nu_tilde;
        let top = gradient.iter().fold(0.0f64, |acc, &g| acc.max(g * scale));
        self.weights[0] *= (-top).exp();
        for (w, g) in self.weights[1..].iter_mut().zip(gradient) {
            *w *= (g * scale - top).exp();
        }
        share_mix(&mut self.weights, self.share_rate);
        Ok(())
    }
}
