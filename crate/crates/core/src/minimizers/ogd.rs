use crate::error::{ensure_len, Error, Result};
use crate::model::{DualDomain, DualIterate};

use super::DualMinimizer;

/// Projected online gradient ascent on the positive orthant, started at 0.
#[derive(Debug, Clone)]
pub struct Ogd {
    lambda: Vec<f64>,
    eta: f64,
}

impl Ogd {
    pub fn new(resources: usize, eta: f64) -> Result<Self> {
        Self::from_point(vec![0.0; resources], eta)
    }

    pub fn from_point(lambda: Vec<f64>, eta: f64) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::InvalidParameter("OGD needs at least one resource".into()));
        }
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::InvalidParameter(format!("learning rate {eta} must be positive")));
        }
        if lambda.iter().any(|&l| !(l >= 0.0)) {
            return Err(Error::InvalidParameter("OGD start point must be nonnegative".into()));
        }
        Ok(Self { lambda, eta })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }
}

impl DualMinimizer for Ogd {
    fn next(&self) -> DualIterate {
        DualIterate { lambda: self.lambda.clone(), domain: DualDomain::PositiveOrthant }
    }

    fn observe(&mut self, gradient: &[f64]) -> Result<()> {
        ensure_len(self.lambda.len(), gradient.len())?;
        for (l, g) in self.lambda.iter_mut().zip(gradient) {
            *l = (*l + self.eta * g).max(0.0);
        }
        Ok(())
    }
}

/// Dual learning rate for the unknown-replenishment configuration:
/// `1 / (18 E_delta + 361 m E_primal + 2 m sqrt(T))`.
pub fn compute_eta(horizon: usize, resources: usize, e_delta: f64, e_primal: f64) -> f64 {
    let m = resources as f64;
    1.0 / (18.0 * e_delta + 361.0 * m * e_primal + 2.0 * m * (horizon as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn starts_at_origin_and_next_is_read_only() {
        let ogd = Ogd::new(3, 0.1).unwrap();
        assert_eq!(ogd.next().lambda, vec![0.0; 3]);
        let ogd = Ogd::from_point(vec![0.5], 0.1).unwrap();
        assert_eq!(ogd.next().lambda, vec![0.5]);
        assert_eq!(ogd.next().lambda, vec![0.5]);
    }

    #[test]
    fn one_step_from_origin() {
        let mut ogd = Ogd::new(3, 0.2).unwrap();
        ogd.observe(&[0.5, -0.5, 1.0]).unwrap();
        assert_eq!(ogd.lambda(), &[0.1, 0.0, 0.2]);
    }

    #[test]
    fn projected_ascent_examples() {
        let mut ogd = Ogd::from_point(vec![0.5], 0.1).unwrap();
        ogd.observe(&[0.3]).unwrap();
        assert!((ogd.lambda()[0] - 0.53).abs() < 1e-12);

        let mut ogd = Ogd::from_point(vec![0.02], 0.1).unwrap();
        ogd.observe(&[-1.0]).unwrap();
        assert_eq!(ogd.lambda(), &[0.0]);

        let mut ogd = Ogd::from_point(vec![0.1, 0.0], 0.5).unwrap();
        ogd.observe(&[-1.0, 1.0]).unwrap();
        assert_eq!(ogd.lambda(), &[0.0, 0.5]);
    }

    #[test]
    fn eta_matches_direct_evaluation() {
        // 1 / (18*81.46 + 361*100 + 2*10) and 1 / (18*1043 + 361*2*500 + 4*100).
        assert!((compute_eta(100, 1, 81.46, 100.0) - 2.660_545_284_077_062e-5).abs() < 1e-15);
        assert!((compute_eta(10_000, 2, 1043.0, 500.0) - 2.630_374_512_723_121_5e-6).abs() < 1e-16);
    }

    proptest! {
        #[test]
        fn iterate_stays_nonnegative(gs in prop::collection::vec(prop::collection::vec(-2.0..=1.0f64, 2), 1..50), eta in 0.001..1.0f64) {
            let mut ogd = Ogd::new(2, eta).unwrap();
            for g in &gs {
                ogd.observe(g).unwrap();
                prop_assert!(ogd.lambda().iter().all(|&l| l >= 0.0));
            }
        }

        #[test]
        fn eta_respects_half_root_t_cap(t in 1usize..1_000_000, m in 1usize..10, ed in 0.0..1e4f64, ep in 0.0..1e4f64) {
            prop_assert!(compute_eta(t, m, ed, ep) <= 1.0 / (2.0 * (t as f64).sqrt()));
        }
    }
}
