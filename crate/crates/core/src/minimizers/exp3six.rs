use rand::RngCore;

use crate::error::{Error, Result};

use super::{sample_index, share_mix, PayoffRange, PrimalMinimizer};

/// Tuning of [`Exp3Six`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exp3SixParams {
    pub learning_rate: f64,
    /// Implicit-exploration offset added to the sampling probability.
    pub ix_rate: f64,
    pub share_rate: f64,
}

impl Exp3SixParams {
    /// `eta = sqrt(ln K / (K T))`, `gamma = eta / 2`, share rate `1/T`.
    pub fn tuned(actions: usize, horizon: usize) -> Self {
        let k = actions as f64;
        let t = horizon as f64;
        let eta = (k.ln() / (k * t)).sqrt();
        Self { learning_rate: eta, ix_rate: eta / 2.0, share_rate: 1.0 / t }
    }
}

/// EXP3 with implicit exploration and fixed-share mixing toward uniform.
///
/// Losses live in `[0, L]` where `L` is the current loss scale. The weight update
/// uses `loss_estimate / L`, so the exponent is scale free; when a payoff larger
/// than `L` arrives the scale doubles and the weights restart from uniform.
#[derive(Debug, Clone)]
pub struct Exp3Six {
    log_weights: Vec<f64>,
    params: Exp3SixParams,
    loss_scale: f64,
    range: PayoffRange,
    restarts: u32,
    pending: Option<(usize, f64)>,
}

impl Exp3Six {
    pub fn new(actions: usize, params: Exp3SixParams, range: PayoffRange) -> Result<Self> {
        if actions == 0 {
            return Err(Error::InvalidParameter("EXP3-SIX needs at least one arm".into()));
        }
        let Exp3SixParams { learning_rate, ix_rate, share_rate } = params;
        if !(learning_rate >= 0.0 && learning_rate.is_finite()) {
            return Err(Error::InvalidParameter(format!("learning rate {learning_rate} must be >= 0")));
        }
        if !(ix_rate >= 0.0 && ix_rate.is_finite()) {
            return Err(Error::InvalidParameter(format!("IX rate {ix_rate} must be >= 0")));
        }
        if !(0.0..1.0).contains(&share_rate) {
            return Err(Error::OutOfRange { what: "share rate", value: share_rate, lo: 0.0, hi: 1.0 });
        }
        Ok(Self {
            log_weights: vec![0.0; actions],
            params,
            loss_scale: 1.0,
            range,
            restarts: 0,
            pending: None,
        })
    }

    pub fn tuned(actions: usize, horizon: usize, range: PayoffRange) -> Result<Self> {
        Self::new(actions, Exp3SixParams::tuned(actions, horizon), range)
    }

    pub fn params(&self) -> Exp3SixParams {
        self.params
    }

    pub fn loss_scale(&self) -> f64 {
        self.loss_scale
    }

    /// Current sampling distribution.
    pub fn probabilities(&self) -> Vec<f64> {
        let top = self.log_weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut p: Vec<f64> = self.log_weights.iter().map(|w| (w - top).exp()).collect();
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= total);
        p
    }

    /// Draws an arm, returning it together with its sampling probability.
    pub fn sample(&self, rng: &mut dyn RngCore) -> (usize, f64) {
        let p = self.probabilities();
        let arm = sample_index(&p, rng);
        (arm, p[arm])
    }

    /// Implicit-exploration importance-weighted estimate `loss / (p + gamma)`.
    pub fn loss_estimate(&self, loss: f64, sampled_prob: f64) -> f64 {
        loss / (sampled_prob + self.params.ix_rate)
    }

    /// Raises the loss scale until it covers `magnitude`, restarting on change.
    fn cover(&mut self, magnitude: f64) {
        if magnitude <= self.loss_scale {
            return;
        }
        while magnitude > self.loss_scale {
            self.loss_scale *= 2.0;
        }
        self.log_weights.iter_mut().for_each(|w| *w = 0.0);
        self.restarts += 1;
    }

    /// Bandit update with a loss in `[0, L]` for the played arm.
    pub fn observe_loss(&mut self, played: usize, loss: f64, sampled_prob: f64) -> Result<()> {
        if played >= self.log_weights.len() {
            return Err(Error::InvalidParameter(format!("arm {played} out of range")));
        }
        if !(0.0..=1.0).contains(&sampled_prob) || (sampled_prob == 0.0 && self.params.ix_rate == 0.0) {
            return Err(Error::OutOfRange { what: "sampling probability", value: sampled_prob, lo: 0.0, hi: 1.0 });
        }
        if !(loss >= 0.0 && loss.is_finite()) {
            return Err(Error::InvalidParameter(format!("loss {loss} must be finite and >= 0")));
        }
        self.cover(loss);
        let estimate = self.loss_estimate(loss, sampled_prob);
        self.log_weights[played] -= self.params.learning_rate * estimate / self.loss_scale;

        let mut w = self.probabilities();
        share_mix(&mut w, self.params.share_rate);
        for (lw, p) in self.log_weights.iter_mut().zip(&w) {
            *lw = p.ln();
        }
        Ok(())
    }
}

impl PrimalMinimizer for Exp3Six {
    fn actions(&self) -> usize {
        self.log_weights.len()
    }

    fn next(&mut self, rng: &mut dyn RngCore) -> usize {
        let (arm, p) = self.sample(rng);
        self.pending = Some((arm, p));
        arm
    }

    fn observe(&mut self, played: usize, utility: &dyn Fn(usize) -> f64) -> Result<()> {
        let prob = match self.pending.take() {
            Some((arm, p)) if arm == played => p,
            _ => return Err(Error::InvalidParameter("observe without a matching next".into())),
        };
        let u = utility(played);
        let loss = match self.range {
            PayoffRange::Unit => 1.0 - u,
            PayoffRange::Adaptive => {
                self.cover(u.abs());
                (self.loss_scale - u) / 2.0
            }
        };
        self.observe_loss(played, loss, prob)
    }

    fn restarts(&self) -> u32 {
        self.restarts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn plain(eta: f64, gamma: f64, share: f64) -> Exp3SixParams {
        Exp3SixParams { learning_rate: eta, ix_rate: gamma, share_rate: share }
    }

    #[test]
    fn fresh_state_is_uniform() {
        let e = Exp3Six::tuned(5, 100, PayoffRange::Unit).unwrap();
        assert!(e.probabilities().iter().all(|&p| (p - 0.2).abs() < 1e-15));
    }

    #[test]
    fn single_step_matches_hand_computation() {
        // Loss 1 on the first arm at p = 1/2 with gamma = 0 gives estimate 2,
        // weights proportional to (e^-2, 1).
        let mut e = Exp3Six::new(2, plain(1.0, 0.0, 0.0), PayoffRange::Unit).unwrap();
        assert_eq!(e.loss_estimate(1.0, 0.5), 2.0);
        e.observe_loss(0, 1.0, 0.5).unwrap();
        let p = e.probabilities();
        assert!((p[0] - 0.119_202_922_022_117_56).abs() < 1e-12);
        assert!((p[1] - 0.880_797_077_977_882_4).abs() < 1e-12);
    }

    #[test]
    fn ix_estimates() {
        let e = Exp3Six::new(2, plain(0.1, 0.5, 0.0), PayoffRange::Unit).unwrap();
        assert_eq!(e.loss_estimate(1.0, 0.5), 1.0);
        let e = Exp3Six::new(2, plain(0.1, 0.25, 0.0), PayoffRange::Unit).unwrap();
        assert_eq!(e.loss_estimate(0.5, 0.25), 1.0);
    }

    #[test]
    fn zero_loss_only_applies_share_mix() {
        let mut e = Exp3Six::new(3, plain(1.0, 0.1, 0.0), PayoffRange::Unit).unwrap();
        e.observe_loss(1, 1.0, 0.3).unwrap();
        let before = e.probabilities();
        e.params.share_rate = 0.3;
        e.observe_loss(2, 0.0, 0.3).unwrap();
        let after = e.probabilities();
        for (b, a) in before.iter().zip(&after) {
            assert!((0.7 * b + 0.1 - a).abs() < 1e-12);
        }
    }

    #[test]
    fn mixing_floor_holds() {
        let mut e = Exp3Six::new(4, plain(5.0, 0.01, 0.1), PayoffRange::Unit).unwrap();
        for t in 0..200 {
            e.observe_loss(t % 3, 1.0, 0.05).unwrap();
            let p = e.probabilities();
            assert!(p.iter().all(|&x| x >= 0.1 / 4.0 - 1e-12));
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_invalid_probabilities() {
        let mut e = Exp3Six::new(2, plain(0.1, 0.05, 0.0), PayoffRange::Unit).unwrap();
        assert!(e.observe_loss(0, 0.5, -0.1).is_err());
        assert!(e.observe_loss(0, 0.5, 1.5).is_err());
        assert!(e.observe_loss(0, -0.5, 0.5).is_err());
    }

    #[test]
    fn adaptive_range_doubles_and_restarts() {
        let mut e = Exp3Six::new(3, plain(0.5, 0.1, 0.0), PayoffRange::Adaptive).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = e.next(&mut rng);
        e.observe(a, &|_| 0.5).unwrap();
        assert_eq!(e.loss_scale(), 1.0);
        assert_eq!(e.restarts(), 0);
        let a = e.next(&mut rng);
        e.observe(a, &|_| -5.0).unwrap();
        assert_eq!(e.loss_scale(), 8.0);
        assert_eq!(e.restarts(), 1);
    }

    #[test]
    fn observe_requires_matching_next() {
        let mut e = Exp3Six::tuned(3, 10, PayoffRange::Unit).unwrap();
        assert!(e.observe(0, &|_| 0.5).is_err());
    }

    #[test]
    fn concentrates_on_best_arm_in_a_stationary_bandit() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let means = [0.2, 0.8, 0.5];
        let horizon = 5_000;
        let mut e = Exp3Six::tuned(3, horizon, PayoffRange::Unit).unwrap();
        for _ in 0..horizon {
            let a = e.next(&mut rng);
            let r = means[a];
            e.observe(a, &|_| r).unwrap();
        }
        let p = e.probabilities();
        assert!(p[1] > 0.6, "{p:?}");
    }
}
