//! Domain types and the Lagrangian arithmetic shared by the rest of the crate.
//!
//! A round of the problem is an [`InputPair`]: a reward in `[0, 1]` and a cost
//! vector in `[-1, 1]^m` for every action. Negative cost components replenish
//! the matching resource. The learner trades reward against budget slack
//! through the Lagrangian `f(x) + <lambda, rho*1 - c(x)>`.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_len, Error, Result};

/// Horizon, resource count and budget of one run.
///
/// `rho` is always derived as `budget / horizon`; there is no way to set it
/// independently.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams {
    horizon: usize,
    resources: usize,
    budget: f64,
    rho: f64,
    beta: Option<f64>,
    delta: f64,
}

impl ProblemParams {
    pub fn new(
        horizon: usize,
        resources: usize,
        budget: f64,
        beta: Option<f64>,
        delta: f64,
    ) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::InvalidParameter("horizon must be positive".into()));
        }
        if resources == 0 {
            return Err(Error::InvalidParameter("resource count must be positive".into()));
        }
        if !(budget.is_finite() && budget >= 0.0) {
            return Err(Error::InvalidParameter(format!("budget {budget} must be finite and >= 0")));
        }
        if let Some(b) = beta {
            if !(b.is_finite() && b >= 0.0) {
                return Err(Error::InvalidParameter(format!("beta {b} must be finite and >= 0")));
            }
        }
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::OutOfRange { what: "delta", value: delta, lo: 0.0, hi: 1.0 });
        }
        Ok(Self {
            horizon,
            resources,
            budget,
            rho: budget / horizon as f64,
            beta,
            delta,
        })
    }

    /// Convenience constructor for a budget that scales with the horizon, `B = rho * T`.
    pub fn per_round(
        horizon: usize,
        resources: usize,
        rho: f64,
        beta: Option<f64>,
        delta: f64,
    ) -> Result<Self> {
        Self::new(horizon, resources, rho * horizon as f64, beta, delta)
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn resources(&self) -> usize {
        self.resources
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// True replenishment factor, when known.
    pub fn beta(&self) -> Option<f64> {
        self.beta
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `nu = beta + rho`, available only when beta is known.
    pub fn nu(&self) -> Option<f64> {
        self.beta.map(|b| b + self.rho)
    }

    pub fn with_beta(mut self, beta: Option<f64>) -> Result<Self> {
        if let Some(b) = beta {
            if !(b.is_finite() && b >= 0.0) {
                return Err(Error::InvalidParameter(format!("beta {b} must be finite and >= 0")));
            }
        }
        self.beta = beta;
        Ok(self)
    }
}

/// What to do with a value that falls outside its declared range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RangePolicy {
    /// Hard error. Used by tests.
    #[default]
    Strict,
    /// Clamp into range and count a warning. Used by long sweeps.
    Clamp,
}

/// Applies a [`RangePolicy`] and counts clamping events.
#[derive(Debug, Clone, Default)]
pub struct RangeGuard {
    policy: RangePolicy,
    warnings: u64,
}

impl RangeGuard {
    pub fn new(policy: RangePolicy) -> Self {
        Self { policy, warnings: 0 }
    }

    pub fn policy(&self) -> RangePolicy {
        self.policy
    }

    pub fn warnings(&self) -> u64 {
        self.warnings
    }

    pub fn fit(&mut self, what: &'static str, value: f64, lo: f64, hi: f64) -> Result<f64> {
        if value.is_nan() {
            return Err(Error::OutOfRange { what, value, lo, hi });
        }
        if (lo..=hi).contains(&value) {
            return Ok(value);
        }
        match self.policy {
            RangePolicy::Strict => Err(Error::OutOfRange { what, value, lo, hi }),
            RangePolicy::Clamp => {
                self.warnings += 1;
                Ok(value.clamp(lo, hi))
            }
        }
    }

    /// [`affine_rescale`] under this guard's policy.
    pub fn rescale(&mut self, value: f64, lo: f64, hi: f64) -> Result<f64> {
        check_interval(lo, hi)?;
        let value = self.fit("raw reward", value, lo, hi)?;
        Ok((value - lo) / (hi - lo))
    }
}

/// One round's rewards and cost vectors for every action.
///
/// Costs are stored row-major: action `a` owns `costs[a*m..(a+1)*m]`.
#[derive(Debug, Clone, PartialEq)]
pub struct InputPair {
    rewards: Vec<f64>,
    costs: Vec<f64>,
    resources: usize,
}

impl InputPair {
    /// Strictly validated constructor.
    pub fn new(rewards: Vec<f64>, costs: Vec<f64>, resources: usize) -> Result<Self> {
        Self::guarded(rewards, costs, resources, &mut RangeGuard::new(RangePolicy::Strict))
    }

    /// Builds from one cost row per action.
    pub fn from_rows(rewards: Vec<f64>, cost_rows: &[Vec<f64>]) -> Result<Self> {
        ensure_len(rewards.len(), cost_rows.len())?;
        let resources = cost_rows.first().map_or(0, Vec::len);
        let mut costs = Vec::with_capacity(resources * cost_rows.len());
        for row in cost_rows {
            ensure_len(resources, row.len())?;
            costs.extend_from_slice(row);
        }
        Self::new(rewards, costs, resources)
    }

    pub fn guarded(
        mut rewards: Vec<f64>,
        mut costs: Vec<f64>,
        resources: usize,
        guard: &mut RangeGuard,
    ) -> Result<Self> {
        if rewards.is_empty() {
            return Err(Error::InvalidParameter("an input pair needs at least one action".into()));
        }
        if resources == 0 {
            return Err(Error::InvalidParameter("resource count must be positive".into()));
        }
        ensure_len(rewards.len() * resources, costs.len())?;
        for r in &mut rewards {
            *r = guard.fit("reward", *r, 0.0, 1.0)?;
        }
        for c in &mut costs {
            *c = guard.fit("cost", *c, -1.0, 1.0)?;
        }
        Ok(Self { rewards, costs, resources })
    }

    pub fn actions(&self) -> usize {
        self.rewards.len()
    }

    pub fn resources(&self) -> usize {
        self.resources
    }

    pub fn reward(&self, action: usize) -> f64 {
        self.rewards[action]
    }

    pub fn cost(&self, action: usize) -> &[f64] {
        &self.costs[action * self.resources..(action + 1) * self.resources]
    }

    pub fn rewards(&self) -> &[f64] {
        &self.rewards
    }
}

/// Feasible set a dual iterate lives in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DualDomain {
    /// `{lambda >= 0 : ||lambda||_1 <= 1/nu_tilde}`.
    SimplexScaled { nu_tilde: f64 },
    PositiveOrthant,
}

/// Lagrange multipliers emitted by a dual minimizer.
#[derive(Debug, Clone, PartialEq)]
pub struct DualIterate {
    pub lambda: Vec<f64>,
    pub domain: DualDomain,
}

impl DualIterate {
    pub fn l1_norm(&self) -> f64 {
        self.lambda.iter().sum()
    }

    /// Checks the domain invariant with a small absolute slack.
    pub fn is_valid(&self, tol: f64) -> bool {
        if self.lambda.iter().any(|&l| !(l >= 0.0)) {
            return false;
        }
        match self.domain {
            DualDomain::SimplexScaled { nu_tilde } => self.l1_norm() <= 1.0 / nu_tilde + tol,
            DualDomain::PositiveOrthant => true,
        }
    }
}

/// A probability vector over a finite action set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Mixture(Vec<f64>);

impl Mixture {
    pub fn new(weights: Vec<f64>, tol: f64) -> Result<Self> {
        if weights.iter().any(|&w| !(w >= -tol)) {
            return Err(Error::InvalidParameter("mixture has a negative weight".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > tol {
            return Err(Error::InvalidParameter(format!("mixture sums to {total}, not 1")));
        }
        Ok(Self(weights))
    }

    pub(crate) fn new_unchecked(weights: Vec<f64>) -> Self {
        Self(weights)
    }

    pub fn point_mass(len: usize, at: usize) -> Self {
        let mut w = vec![0.0; len];
        w[at] = 1.0;
        Self(w)
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn support_size(&self, tol: f64) -> usize {
        self.0.iter().filter(|&&w| w > tol).count()
    }
}

/// `f + sum_i lambda_i * (rho - c_i)`.
pub fn lagrangian_value(reward: f64, cost: &[f64], lambda: &[f64], rho: f64) -> Result<f64> {
    ensure_len(cost.len(), lambda.len())?;
    let penalty: f64 = lambda.iter().zip(cost).map(|(l, c)| l * (rho - c)).sum();
    Ok(reward + penalty)
}

/// Gradient `c - rho*1` of the (linear) dual utility `lambda -> <lambda, c - rho*1>`.
pub fn dual_gradient(cost: &[f64], rho: f64) -> Vec<f64> {
    cost.iter().map(|c| c - rho).collect()
}

fn check_interval(lo: f64, hi: f64) -> Result<()> {
    if lo.is_finite() && hi.is_finite() && lo < hi {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("rescale interval [{lo}, {hi}] is empty")))
    }
}

/// Maps `[lo, hi]` onto `[0, 1]` affinely. Values outside the interval are an error;
/// use [`RangeGuard::rescale`] to clamp instead.
pub fn affine_rescale(value: f64, lo: f64, hi: f64) -> Result<f64> {
    RangeGuard::new(RangePolicy::Strict).rescale(value, lo, hi)
}

/// Inverse of [`affine_rescale`].
pub fn affine_unscale(value: f64, lo: f64, hi: f64) -> f64 {
    value * (hi - lo) + lo
}

/// Competitive ratio `(beta + rho) / (1 + beta)` of the adversarial guarantee.
pub fn alpha(beta: f64, rho: f64) -> Result<f64> {
    if !(beta >= 0.0 && rho >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha needs beta >= 0 and rho >= 0 (got {beta}, {rho})"
        )));
    }
    let nu = beta + rho;
    if nu <= 0.0 {
        return Err(Error::InvalidParameter("nu = beta + rho is zero; the guarantee is vacuous".into()));
    }
    Ok(nu / (1.0 + beta))
}

/// `sqrt(8 T ln(4 m T / delta))`.
pub fn concentration_radius(horizon: usize, resources: usize, delta: f64) -> f64 {
    let t = horizon as f64;
    (8.0 * t * (4.0 * resources as f64 * t / delta).ln()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TOL: f64 = 1e-9;

    #[test]
    fn lagrangian_examples() {
        assert!((lagrangian_value(0.5, &[0.2], &[2.0], 0.3).unwrap() - 0.7).abs() < TOL);
        assert!((lagrangian_value(0.5, &[0.9], &[0.0], 0.3).unwrap() - 0.5).abs() < TOL);
        assert!((lagrangian_value(0.0, &[-1.0, 0.0], &[1.0, 1.0], 0.5).unwrap() - 2.0).abs() < TOL);
    }

    #[test]
    fn lagrangian_rejects_mismatched_lengths() {
        assert!(matches!(
            lagrangian_value(0.5, &[0.2, 0.1], &[1.0], 0.3),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn dual_gradient_examples() {
        assert_eq!(dual_gradient(&[1.0], 0.25), vec![0.75]);
        assert_eq!(dual_gradient(&[-1.0, 0.0], 0.0), vec![-1.0, 0.0]);
        let g = dual_gradient(&[0.3, -0.2], 0.3);
        assert!(g[0].abs() < TOL && (g[1] + 0.5).abs() < TOL);
    }

    #[test]
    fn rescale_examples() {
        assert_eq!(affine_rescale(-1.0, -1.0, 1.0).unwrap(), 0.0);
        assert_eq!(affine_rescale(0.0, -1.0, 1.0).unwrap(), 0.5);
        assert!((affine_rescale(0.7, -1.0, 1.0).unwrap() - 0.85).abs() < TOL);
    }

    #[test]
    fn rescale_out_of_range_is_strict_error_or_counted_clamp() {
        assert!(matches!(affine_rescale(1.5, -1.0, 1.0), Err(Error::OutOfRange { .. })));
        assert!(affine_rescale(0.0, 1.0, 1.0).is_err());
        let mut guard = RangeGuard::new(RangePolicy::Clamp);
        assert_eq!(guard.rescale(1.5, -1.0, 1.0).unwrap(), 1.0);
        assert_eq!(guard.rescale(-3.0, -1.0, 1.0).unwrap(), 0.0);
        assert_eq!(guard.warnings(), 2);
    }

    #[test]
    fn alpha_examples() {
        assert!((alpha(0.0, 0.3).unwrap() - 0.3).abs() < TOL);
        assert!((alpha(1.0, 0.0).unwrap() - 0.5).abs() < TOL);
        assert!((alpha(0.25, 0.25).unwrap() - 0.4).abs() < TOL);
        assert!(alpha(0.0, 0.0).is_err());
    }

    #[test]
    fn concentration_radius_matches_high_precision_oracle() {
        // Frozen from a 30-digit mpmath evaluation of sqrt(8 T ln(4 m T / delta)).
        assert!((concentration_radius(100, 1, 0.1) - 81.456_980_744_940_6).abs() < 1e-9);
        assert!((concentration_radius(100, 2, 0.1) - 84.792_437_496_097_37).abs() < 1e-9);
        assert!((concentration_radius(10_000, 1, 0.05) - 1_042.779_631_816_811_6).abs() < 1e-9);
    }

    #[test]
    fn params_derive_rho() {
        let p = ProblemParams::new(2000, 2, 600.0, Some(0.2), 0.05).unwrap();
        assert!((p.rho() - 0.3).abs() < 1e-15);
        assert!((p.rho() * p.horizon() as f64 - p.budget()).abs() < TOL);
        assert!((p.nu().unwrap() - 0.5).abs() < TOL);
        assert!(ProblemParams::new(10, 1, 1.0, None, 0.0).is_err());
        assert!(ProblemParams::new(10, 1, 1.0, None, 1.5).is_err());
        assert!(ProblemParams::new(0, 1, 1.0, None, 0.5).is_err());
    }

    #[test]
    fn input_pair_checks_ranges() {
        assert!(InputPair::new(vec![1.2], vec![0.0], 1).is_err());
        assert!(InputPair::new(vec![0.5], vec![-1.5], 1).is_err());
        let mut guard = RangeGuard::new(RangePolicy::Clamp);
        let pair = InputPair::guarded(vec![1.2, 0.3], vec![0.0, -1.5], 1, &mut guard).unwrap();
        assert_eq!(pair.reward(0), 1.0);
        assert_eq!(pair.cost(1), &[-1.0]);
        assert_eq!(guard.warnings(), 2);
    }

    #[test]
    fn dual_iterate_domain() {
        let it = DualIterate { lambda: vec![1.0, 1.0], domain: DualDomain::SimplexScaled { nu_tilde: 0.5 } };
        assert!(it.is_valid(0.0));
        let it = DualIterate { lambda: vec![1.5, 1.0], domain: DualDomain::SimplexScaled { nu_tilde: 0.5 } };
        assert!(!it.is_valid(1e-12));
    }

    fn unit() -> impl Strategy<Value = f64> {
        0.0..=1.0f64
    }

    proptest! {
        #[test]
        fn lagrangian_is_affine_in_lambda(
            f in unit(),
            c in prop::collection::vec(-1.0..=1.0f64, 3),
            l1 in prop::collection::vec(0.0..5.0f64, 3),
            l2 in prop::collection::vec(0.0..5.0f64, 3),
            a in unit(),
            rho in unit(),
        ) {
            let mix: Vec<f64> = l1.iter().zip(&l2).map(|(x, y)| a * x + (1.0 - a) * y).collect();
            let lhs = lagrangian_value(f, &c, &mix, rho).unwrap();
            let rhs = a * lagrangian_value(f, &c, &l1, rho).unwrap()
                + (1.0 - a) * lagrangian_value(f, &c, &l2, rho).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-9);
        }

        #[test]
        fn penalty_is_negated_dual_utility(
            f in unit(),
            c in prop::collection::vec(-1.0..=1.0f64, 4),
            l in prop::collection::vec(0.0..5.0f64, 4),
            rho in unit(),
        ) {
            let g = dual_gradient(&c, rho);
            let utility: f64 = l.iter().zip(&g).map(|(x, y)| x * y).sum();
            let penalty = lagrangian_value(f, &c, &l, rho).unwrap() - f;
            prop_assert!((penalty + utility).abs() < 1e-9);
        }

        #[test]
        fn rescale_preserves_argmax(values in prop::collection::vec(-1.0..=1.0f64, 1..20)) {
            let argmax = |v: &[f64]| {
                let best = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                v.iter().enumerate().filter(|(_, &x)| x == best).map(|(i, _)| i).collect::<Vec<_>>()
            };
            let mapped: Vec<f64> = values.iter().map(|&v| affine_rescale(v, -1.0, 1.0).unwrap()).collect();
            prop_assert_eq!(argmax(&values), argmax(&mapped));
        }

        #[test]
        fn concentration_radius_is_monotone(t in 1usize..5000, m in 1usize..8, d in 0.01..=0.9f64) {
            let base = concentration_radius(t, m, d);
            prop_assert!(concentration_radius(t + 1, m, d) > base);
            prop_assert!(concentration_radius(t, m + 1, d) > base);
            prop_assert!(concentration_radius(t, m, d * 1.05) < base);
        }
    }
}
