//! Replicable explore-then-commit.
//!
//! Each phase brings every arm to `N_p` cumulative pulls, then compares the
//! empirical top-two gap with the randomized threshold
//! `deflation * (2 + U_{p,0}) * beta_max(p)`. Once the gap clears it, the
//! empirical best arm is played until the horizon.

use super::config::{AlgorithmConfig, AlgorithmKind};
use super::runner::Rounds;
use super::trace::{DecisionRecord, RunTrace};
use super::check_inputs;
use crate::environments::{argmax, top_two_gap, Dataset};
use crate::error::Result;
use crate::randomness::SharedRandomness;
use crate::schedule::Schedule;

pub fn run_rec(ds: &Dataset, cfg: &AlgorithmConfig, u: &SharedRandomness) -> Result<RunTrace> {
    check_inputs(ds, cfg, AlgorithmKind::Rec)?;
    let sched = Schedule::new(cfg.phase)?;
    let rep = cfg.rep;
    let k = ds.num_arms();
    let all: Vec<usize> = (0..k).collect();

    let mut rounds = Rounds::new(ds);
    let mut decisions = Vec::new();
    let mut active_sets = vec![all.clone()];
    let mut emp_means = vec![0.0; k];
    let mut commit = None;

    let mut p = 1;
    while !rounds.exhausted() {
        if !rounds.fill_to(&all, sched.budget(p)) {
            break;
        }
        for (i, m) in emp_means.iter_mut().enumerate() {
            *m = rounds.mean(i);
        }
        let threshold = rep.deflation * (2.0 + u.value(p, 0)) * sched.conf_max(p, rep.rho_all, rep.c_mult)?;
        let fired = top_two_gap(emp_means.iter().copied()) >= threshold;
        let kept = fired.then(|| argmax(&emp_means).expect("k >= 2"));
        decisions.push(DecisionRecord {
            phase: p,
            slot: 0,
            fired,
            kept,
        });
        if let Some(best) = kept {
            active_sets.push(vec![best]);
            commit = Some((best, p));
            rounds.exploit(best);
            break;
        }
        active_sets.push(all.clone());
        p += 1;
    }

    Ok(RunTrace {
        kind: AlgorithmKind::Rec,
        arms: rounds.arms,
        decisions,
        active_sets,
        commit_arm: commit.map(|c| c.0),
        commit_phase: commit.map(|c| c.1),
        pull_counts: rounds.counts,
        emp_means,
    })
}
