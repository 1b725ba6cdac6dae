//! Replicable successive elimination.
//!
//! At the end of phase `p` two kinds of tests run on the active set:
//! slot 0 keeps only the empirical best when the top-two gap clears
//! `(2 + U_{p,0}) beta_max_a(p)`; otherwise each active arm `i` is dropped
//! when its own gap clears `(2 + U_{p,i+1}) beta_max_e(p)`. A zero budget
//! disables the corresponding test.

use super::config::{AlgorithmConfig, AlgorithmKind};
use super::runner::Rounds;
use super::trace::{DecisionRecord, RunTrace};
use super::check_inputs;
use crate::environments::{top_two_gap, Dataset};
use crate::error::Result;
use crate::randomness::SharedRandomness;
use crate::schedule::{ReplicationParams, Schedule};

pub fn run_rse(ds: &Dataset, cfg: &AlgorithmConfig, u: &SharedRandomness) -> Result<RunTrace> {
    check_inputs(ds, cfg, AlgorithmKind::Rse)?;
    let sched = Schedule::new(cfg.phase)?;
    let k = ds.num_arms();

    let mut rounds = Rounds::new(ds);
    let mut active: Vec<usize> = (0..k).collect();
    let mut active_sets = vec![active.clone()];
    let mut decisions = Vec::new();
    let mut emp_means = vec![0.0; k];
    let mut commit = None;

    let mut p = 1;
    while !rounds.exhausted() {
        if active.len() == 1 {
            commit = Some((active[0], p - 1));
            rounds.exploit(active[0]);
            break;
        }
        if !rounds.fill_to(&active, sched.budget(p)) {
            break;
        }
        for &i in &active {
            emp_means[i] = rounds.mean(i);
        }
        active = eliminate(&sched, &cfg.rep, u, p, &active, &emp_means, &mut decisions)?;
        active_sets.push(active.clone());
        p += 1;
    }

    Ok(RunTrace {
        kind: AlgorithmKind::Rse,
        arms: rounds.arms,
        decisions,
        active_sets,
        commit_arm: commit.map(|c| c.0),
        commit_phase: commit.map(|c| c.1),
        pull_counts: rounds.counts,
        emp_means,
    })
}

/// Both elimination rules at the end of phase `p`; returns `A_{p+1}`.
///
/// When the keep-the-best test fires the per-arm loop is skipped, since a
/// single survivor cannot lose more arms.
pub(crate) fn eliminate(
    sched: &Schedule,
    rep: &ReplicationParams,
    u: &SharedRandomness,
    p: usize,
    active: &[usize],
    means: &[f64],
    log: &mut Vec<DecisionRecord>,
) -> Result<Vec<usize>> {
    let mut best = active[0];
    for &i in active {
        if means[i] > means[best] {
            best = i;
        }
    }

    if rep.rho_all > 0.0 {
        let gap = top_two_gap(active.iter().map(|&i| means[i]));
        let width = sched.conf_max(p, rep.rho_all, rep.c_mult)?;
        let fired = gap >= rep.deflation * (2.0 + u.value(p, 0)) * width;
        log.push(DecisionRecord {
            phase: p,
            slot: 0,
            fired,
            kept: fired.then_some(best),
        });
        if fired {
            return Ok(vec![best]);
        }
    }

    if rep.rho_each <= 0.0 {
        return Ok(active.to_vec());
    }
    let width = sched.conf_max(p, rep.rho_each, rep.c_mult)?;
    let mut next = Vec::with_capacity(active.len());
    for &i in active {
        let gap = means[best] - means[i];
        let fired = gap >= rep.deflation * (2.0 + u.value(p, i + 1)) * width;
        log.push(DecisionRecord {
            phase: p,
            slot: i + 1,
            fired,
            kept: None,
        });
        if !fired {
            next.push(i);
        }
    }
    Ok(next)
}
