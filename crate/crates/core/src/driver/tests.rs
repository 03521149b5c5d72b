use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::environments::{adversarial_two_phase, AdversarialScript, Noise, StochasticBwrk, StochasticSpec};

fn script(beta: f64, rounds: usize, reward: [f64; 2], cost: [f64; 2]) -> Arc<AdversarialScript> {
    let rewards = vec![reward.to_vec(); rounds];
    let costs = vec![vec![vec![cost[0]], vec![cost[1]]]; rounds];
    Arc::new(AdversarialScript::new(beta, rewards, costs).unwrap())
}

fn seeds(s: u64) -> RunSeeds {
    RunSeeds::from_run_seed(s)
}

fn stochastic(noise: Noise) -> StochasticBwrk {
    StochasticBwrk::new(StochasticSpec {
        mean_rewards: vec![0.9, 0.5, 0.3, 0.0],
        mean_costs: vec![vec![0.8, 0.6], vec![0.4, 0.2], vec![0.1, 0.3], vec![-0.2, -0.2]],
        noise,
        void_index: 3,
    })
    .unwrap()
}

#[test]
fn budget_step_examples() {
    assert_eq!(budget_step(&[2.0], &[0.7]), vec![1.3]);
    assert_eq!(budget_step(&[2.0], &[-0.5]), vec![2.5]);
    assert_eq!(budget_step(&[1.0, 0.5], &[1.0, -1.0]), vec![0.0, 1.5]);
}

#[test]
fn primal_feed_examples() {
    // beta_tilde + rho = 0.5
    let known = Mode::KnownBeta { beta_tilde: 0.25 };
    assert_eq!(primal_feed(&known, 0.25, 2.0), 0.25);
    assert_eq!(primal_feed(&known, 0.25, 0.0), 0.0);
    assert_eq!(primal_feed(&known, 0.25, -1.0), 0.0);
    assert_eq!(primal_feed(&known, 0.25, 100.0), 1.0);
    assert_eq!(primal_feed(&Mode::UnknownBeta, 0.25, 3.7), 3.7);
}

#[test]
fn low_budget_starts_in_fallback_then_recovers() {
    let s = script(1.0, 2, [1.0, 0.0], [1.0, -1.0]);
    let params = ProblemParams::new(2, 1, 0.5, Some(1.0), 0.05).unwrap();
    let trace = run(&mut s.replay(), &ModeConfig::known_beta(1.0), &params, seeds(1), &RunOptions::default()).unwrap();
    let r = &trace.rounds;
    assert!(!r[0].in_good);
    assert_eq!(r[0].action, 1);
    assert_eq!(r[1].budget, vec![1.5]);
    assert!(r[1].in_good);
    assert_eq!(trace.tau, Some(1));
    assert_eq!(trace.fallback_rounds, 1);
    assert_eq!(trace.good_rounds, 1);
}

#[test]
fn zero_replenishment_stays_in_fallback() {
    let s = script(0.0, 50, [1.0, 0.2], [0.5, 0.0]);
    let params = ProblemParams::new(50, 1, 0.5, Some(0.0), 0.05).unwrap();
    let trace = run(&mut s.replay(), &ModeConfig::known_beta(0.0), &params, seeds(2), &RunOptions::default()).unwrap();
    assert_eq!(trace.fallback_rounds, 50);
    assert_eq!(trace.tau, Some(50));
    assert!((trace.cumulative_reward - 10.0).abs() < 1e-12);
    let first = trace.rounds[0].lambda.clone();
    assert!(trace.rounds.iter().all(|r| r.action == 1 && r.lambda == first));
}

#[test]
fn free_reward_arm_dominates() {
    let t = 2000;
    let s = script(0.0, t, [1.0, 0.0], [0.0, 0.0]);
    let params = ProblemParams::new(t, 1, t as f64, Some(0.0), 0.05).unwrap();
    let trace = run(&mut s.replay(), &ModeConfig::known_beta(0.0), &params, seeds(3), &RunOptions::default()).unwrap();
    assert_eq!(trace.good_rounds, t);
    assert_eq!(trace.tau, None);
    // The primal sees utilities scaled by nu_tilde / 4 = 1/4, so its regret
    // counts four times in reward units.
    let slack = 4.0 * 2.0 * (2.0 * t as f64 * 2f64.ln()).sqrt();
    assert!(trace.cumulative_reward >= t as f64 - slack, "{}", trace.cumulative_reward);
}

#[test]
fn exhausted_environment_is_an_error() {
    let s = script(0.0, 3, [1.0, 0.0], [0.0, 0.0]);
    let params = ProblemParams::new(5, 1, 5.0, Some(0.0), 0.05).unwrap();
    let err = run(&mut s.replay(), &ModeConfig::known_beta(0.0), &params, seeds(0), &RunOptions::default()).unwrap_err();
    assert!(matches!(err, Error::EnvironmentExhausted { rounds: 3, horizon: 3 }));
}

#[test]
fn beta_tilde_above_true_beta_is_rejected() {
    let s = script(0.2, 4, [1.0, 0.0], [0.0, -0.2]);
    let params = ProblemParams::new(4, 1, 4.0, Some(0.2), 0.05).unwrap();
    let err = run(&mut s.replay(), &ModeConfig::known_beta(0.3), &params, seeds(0), &RunOptions::default()).unwrap_err();
    assert!(matches!(err, Error::InvalidParameter(_)));
}

#[test]
fn resource_mismatch_is_rejected() {
    let s = script(0.0, 4, [1.0, 0.0], [0.0, 0.0]);
    let params = ProblemParams::new(4, 2, 4.0, Some(0.0), 0.05).unwrap();
    assert!(run(&mut s.replay(), &ModeConfig::unknown_beta(), &params, seeds(0), &RunOptions::default()).is_err());
}

#[test]
fn minimizers_update_only_in_good_rounds() {
    // rho = 0 and nu_tilde = 1, so lambda starts at 1/2.
    // Fixed share starts at uniform over m + 1 vertices, so lambda stays at its
    // initial value until the first active round.
    let s = script(1.0, 6, [0.5, 0.0], [1.0, -1.0]);
    let params = ProblemParams::new(6, 1, 0.0, Some(1.0), 0.05).unwrap();
    let trace = run(&mut s.replay(), &ModeConfig::known_beta(1.0), &params, seeds(4), &RunOptions::default()).unwrap();
    let rounds = &trace.rounds;
    for w in rounds.windows(2) {
        if !w[0].in_good {
            assert_eq!(w[0].lambda, w[1].lambda);
        }
    }
    assert!(rounds.iter().any(|r| r.in_good));
}

#[test]
fn slim_trace_keeps_aggregates() {
    let config = ModeConfig::known_beta(0.2);
    let params = ProblemParams::per_round(500, 2, 0.3, Some(0.2), 0.05).unwrap();
    let full = run(&mut stochastic(Noise::Bernoulli), &config, &params, seeds(9), &RunOptions::default()).unwrap();
    let slim_opts = RunOptions { slim: true, ..RunOptions::default() };
    let slim = run(&mut stochastic(Noise::Bernoulli), &config, &params, seeds(9), &slim_opts).unwrap();
    assert!(slim.rounds.is_empty());
    assert_eq!(slim.cumulative_reward, full.cumulative_reward);
    assert_eq!(slim.final_budget, full.final_budget);
    assert_eq!(slim.max_multiplier, full.max_multiplier);
}

#[test]
fn csv_layout() {
    let s = script(1.0, 3, [1.0, 0.0], [1.0, -1.0]);
    let params = ProblemParams::new(3, 1, 0.5, Some(1.0), 0.05).unwrap();
    let trace = run(&mut s.replay(), &ModeConfig::known_beta(1.0), &params, seeds(1), &RunOptions::default()).unwrap();
    let mut buf = Vec::new();
    trace.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,action,reward,cost_1,lambda_1,budget_1,in_T_G"));
    assert_eq!(lines.next(), Some("1,1,0,-1,0.42857142857142855,0.5,0"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn report_arithmetic() {
    let s = script(0.5, 2, [1.0, 0.0], [1.0, -0.5]);
    let params = ProblemParams::new(2, 1, 0.0, Some(0.5), 0.05).unwrap();
    let mut trace = run(&mut s.replay(), &ModeConfig::known_beta(0.5), &params, seeds(1), &RunOptions::default()).unwrap();
    trace.cumulative_reward = 500.0;
    let rep = regret_report(&trace, &Baseline { opt_gamma: Some(1000.0), opt_lp: None }, &params.clone().with_beta(Some(1.0 / 6.0 * 2.0 - 0.0)).unwrap());
    // nu = 1/3, alpha = (1/3) / (4/3) = 0.25
    assert!((rep.adversarial_gap.unwrap() - (-250.0)).abs() < 1e-9);

    let params = ProblemParams::per_round(100, 1, 0.5, Some(0.5), 0.05).unwrap();
    let mut trace = trace.clone();
    trace.horizon = 100;
    trace.cumulative_reward = 500.0;
    trace.tau = None;
    trace.fallback_rounds = 0;
    let rep = regret_report(&trace, &Baseline { opt_gamma: Some(1000.0), opt_lp: Some(5.0) }, &params);
    // nu = 1, alpha = 1 / 1.5
    assert!((rep.adversarial_gap.unwrap() - (1000.0 / 1.5 - 500.0)).abs() < 1e-9);
    assert_eq!(rep.stochastic_gap, Some(0.0));
    assert_eq!(rep.tau, None);
    assert_eq!(rep.fallback_rounds, 0);
}

#[test]
fn report_alpha_example() {
    // beta = 0.25 and rho = 0.25 give alpha = 0.4.
    let params = ProblemParams::per_round(4, 1, 0.25, Some(0.25), 0.05).unwrap();
    let s = script(0.25, 4, [1.0, 0.0], [1.0, -0.25]);
    let mut trace = run(&mut s.replay(), &ModeConfig::known_beta(0.25), &params, seeds(1), &RunOptions::default()).unwrap();
    trace.cumulative_reward = 500.0;
    let rep = regret_report(&trace, &Baseline { opt_gamma: Some(1000.0), opt_lp: None }, &params);
    assert!((rep.alpha.unwrap() - 0.4).abs() < 1e-15);
    assert!((rep.adversarial_gap.unwrap() + 100.0).abs() < 1e-9);
}

#[test]
fn hindsight_opt_gamma_from_trace() {
    let s = Arc::new(adversarial_two_phase(100, 2, 1, 0.25).unwrap());
    let params = ProblemParams::per_round(100, 1, 0.25, Some(0.25), 0.05).unwrap();
    let trace = run(&mut s.replay(), &ModeConfig::known_beta(0.25), &params, seeds(5), &RunOptions::default()).unwrap();
    let rep = regret_report(&trace, &Baseline::default(), &params);
    assert_eq!(rep.opt_gamma, 50.0);
}

#[test]
fn segment_regret_needs_full_trace() {
    let params = ProblemParams::per_round(200, 2, 0.3, Some(0.2), 0.05).unwrap();
    let opts = RunOptions { slim: true, ..RunOptions::default() };
    let slim = run(&mut stochastic(Noise::None), &ModeConfig::known_beta(0.2), &params, seeds(1), &opts).unwrap();
    assert!(dual_segment_regret(&slim, 0.3, 2.0).is_err());
    let full =
        run(&mut stochastic(Noise::None), &ModeConfig::known_beta(0.2), &params, seeds(1), &RunOptions::default()).unwrap();
    let seg = dual_segment_regret(&full, 0.3, 2.0).unwrap();
    assert!(seg.before_tau.is_finite() && seg.after_tau.is_finite());
}

#[test]
fn hedge_and_fixed_primals_run() {
    let params = ProblemParams::per_round(300, 2, 0.3, Some(0.2), 0.05).unwrap();
    for primal in [PrimalKind::Hedge, PrimalKind::Fixed { action: 2 }] {
        for config in [ModeConfig::known_beta(0.2), ModeConfig::unknown_beta()] {
            let trace =
                run(&mut stochastic(Noise::Uniform { half_width: 0.1 }), &config.with_primal(primal), &params, seeds(2), &RunOptions::default())
                    .unwrap();
            assert!(trace.min_budget >= 0.0);
        }
    }
    let err = run(
        &mut stochastic(Noise::None),
        &ModeConfig::unknown_beta().with_primal(PrimalKind::Fixed { action: 9 }),
        &params,
        seeds(2),
        &RunOptions::default(),
    );
    assert!(err.is_err());
}

#[test]
fn mode_config_json() {
    let c: ModeConfig = serde_json::from_str(r#"{"mode":{"kind":"known_beta","beta_tilde":0.2}}"#).unwrap();
    assert_eq!(c, ModeConfig::known_beta(0.2));
    let c: ModeConfig =
        serde_json::from_str(r#"{"mode":{"kind":"unknown_beta"},"primal":{"kind":"fixed","action":1}}"#).unwrap();
    assert_eq!(c.primal, PrimalKind::Fixed { action: 1 });
}

fn assert_trace_invariants(trace: &RunTrace, nu_tilde: Option<f64>) {
    assert_eq!(trace.rounds.len(), trace.horizon);
    assert_eq!(trace.good_rounds + trace.fallback_rounds, trace.horizon);
    for w in trace.rounds.windows(2) {
        let expected = budget_step(&w[0].budget, &w[0].cost);
        assert_eq!(w[1].budget, expected);
    }
    let last = trace.rounds.last().unwrap();
    assert_eq!(trace.final_budget, budget_step(&last.budget, &last.cost));
    for r in &trace.rounds {
        let low = r.budget.iter().any(|&b| b < 1.0);
        assert_eq!(r.in_good, !low);
        if low {
            assert_eq!(r.action, trace.void_action);
        }
        assert!(r.budget.iter().all(|&b| b >= 0.0));
        if let Some(nu) = nu_tilde {
            assert!(r.lambda.iter().sum::<f64>() <= 1.0 / nu + 1e-12);
        }
    }
    assert!(trace.final_budget.iter().all(|&b| b >= 0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn trace_invariants_hold(seed in any::<u64>(), rho in 0.01f64..0.6, known in any::<bool>(), noise in 0usize..3) {
        let noise = [Noise::None, Noise::Uniform { half_width: 0.3 }, Noise::Bernoulli][noise];
        let params = ProblemParams::per_round(400, 2, rho, Some(0.2), 0.05).unwrap();
        let config = if known { ModeConfig::known_beta(0.2) } else { ModeConfig::unknown_beta() };
        let trace = run(&mut stochastic(noise), &config, &params, seeds(seed), &RunOptions::default()).unwrap();
        assert_trace_invariants(&trace, known.then_some(0.2 + rho));
    }

    #[test]
    fn replay_is_bitwise_identical(seed in any::<u64>(), known in any::<bool>()) {
        let params = ProblemParams::per_round(300, 2, 0.3, Some(0.2), 0.05).unwrap();
        let config = if known { ModeConfig::known_beta(0.1) } else { ModeConfig::unknown_beta() };
        let a = run(&mut stochastic(Noise::Bernoulli), &config, &params, seeds(seed), &RunOptions::default()).unwrap();
        let b = run(&mut stochastic(Noise::Bernoulli), &config, &params, seeds(seed), &RunOptions::default()).unwrap();
        let (mut x, mut y) = (Vec::new(), Vec::new());
        a.write_csv(&mut x).unwrap();
        b.write_csv(&mut y).unwrap();
        prop_assert_eq!(x, y);
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
