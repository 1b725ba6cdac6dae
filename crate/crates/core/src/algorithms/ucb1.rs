//! UCB1 baseline: one pull of each arm in index order, then
//! `argmax mu_i + sqrt(2 sigma^2 ln t / N_i)` with `t` the current round.

use super::config::{AlgorithmConfig, AlgorithmKind};
use super::runner::Rounds;
use super::trace::RunTrace;
use super::check_inputs;
use crate::environments::Dataset;
use crate::error::Result;

pub fn run_ucb1(ds: &Dataset, cfg: &AlgorithmConfig) -> Result<RunTrace> {
    check_inputs(ds, cfg, AlgorithmKind::Ucb1)?;
    let k = ds.num_arms();
    let two_var = 2.0 * cfg.phase.sigma * cfg.phase.sigma;
    let mut rounds = Rounds::new(ds);

    let mut t = 0u64;
    while !rounds.exhausted() {
        t += 1;
        let arm = if (t as usize) <= k {
            t as usize - 1
        } else {
            let log_t = (t as f64).ln();
            let mut best = 0;
            let mut best_index = f64::NEG_INFINITY;
            for i in 0..k {
                let n = rounds.counts[i] as f64;
                let index = rounds.sums[i] / n + (two_var * log_t / n).sqrt();
                if index > best_index {
                    best_index = index;
                    best = i;
                }
            }
            best
        };
        rounds.pull(arm);
    }

    let emp_means = (0..k).map(|i| rounds.mean(i)).collect();
    Ok(RunTrace {
        kind: AlgorithmKind::Ucb1,
        arms: rounds.arms,
        decisions: Vec::new(),
        active_sets: vec![(0..k).collect()],
        commit_arm: None,
        commit_phase: None,
        pull_counts: rounds.counts,
        emp_means,
    })
}
