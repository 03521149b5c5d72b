//! Primal-dual online learning under long-term budget constraints whose
//! resources can be replenished.
//!
//! The crate is organised around the primal-dual loop in [`driver`]: a primal
//! regret minimizer picks actions against Lagrangian-penalised rewards while a
//! dual minimizer adapts the multipliers. [`environments`] produce inputs,
//! [`baselines`] computes the offline benchmarks, and [`harness`] runs seeded
//! experiments and writes reports.

pub mod baselines;
pub mod driver;
pub mod environments;
pub mod harness;
pub mod error;
pub mod minimizers;
pub mod model;
pub mod seed;

pub use driver::{run, ModeConfig, RunOptions, RunTrace};
pub use error::{Error, Result};
pub use model::{
    affine_rescale, affine_unscale, alpha, concentration_radius, dual_gradient, lagrangian_value,
    DualDomain, DualIterate, InputPair, Mixture, ProblemParams, RangeGuard, RangePolicy,
};
pub use seed::RunSeeds;
