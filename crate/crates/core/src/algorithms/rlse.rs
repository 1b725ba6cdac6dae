//! Replicable linear successive elimination.
//!
//! Each phase recomputes an approximate G-optimal design over the active
//! arms, pulls arm `i` exactly `ceil(N_lin(p) pi_i)` times, fits `theta` by
//! least squares on that phase's observations only, and applies the same
//! two elimination rules as RSE to `mu_i = <x_i, theta_hat>`.

use std::borrow::Cow;

use nalgebra::{DMatrix, DVector};

use super::config::{AlgorithmConfig, AlgorithmKind};
use super::rse::eliminate;
use super::runner::Rounds;
use super::trace::RunTrace;
use super::check_inputs;
use crate::design::{approx_g_optimal, linear_phase_budget, phase_allocation, solve_normal_equations};
use crate::environments::Dataset;
use crate::error::Result;
use crate::randomness::SharedRandomness;
use crate::schedule::Schedule;

pub fn run_rlse(ds: &Dataset, cfg: &AlgorithmConfig, u: &SharedRandomness) -> Result<RunTrace> {
    check_inputs(ds, cfg, AlgorithmKind::Rlse)?;
    let k = ds.num_arms();
    // A plain K-armed instance is the linear model with standard basis features.
    let features: Cow<'_, DMatrix<f64>> = match ds.instance().linear_structure() {
        Some(lin) => Cow::Borrowed(&lin.features),
        None => Cow::Owned(DMatrix::identity(k, k)),
    };
    let features = features.as_ref();
    let dim = features.ncols();
    let sched = Schedule::new(cfg.phase)?;

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
        let design = approx_g_optimal(features, &active)?;
        let n_lin = linear_phase_budget(p, cfg.phase.a, cfg.phase.sigma, dim);
        let alloc = phase_allocation(&design, n_lin);

        let mut phase_sums = vec![0.0; k];
        let complete = rounds.round_robin(&design.arms, &alloc, |arm, r| phase_sums[arm] += r);
        if !complete {
            break;
        }

        let theta = fit_phase(features, &design.arms, &alloc, &phase_sums)?;
        for (i, m) in emp_means.iter_mut().enumerate() {
            *m = features.row(i).transpose().dot(&theta);
        }
        active = eliminate(&sched, &cfg.rep, u, p, &active, &emp_means, &mut decisions)?;
        active_sets.push(active.clone());
        p += 1;
    }

    Ok(RunTrace {
        kind: AlgorithmKind::Rlse,
        arms: rounds.arms,
        decisions,
        active_sets,
        commit_arm: commit.map(|c| c.0),
        commit_phase: commit.map(|c| c.1),
        pull_counts: rounds.counts,
        emp_means,
    })
}

/// Least squares on one phase, in coordinates of the span of the pulled
/// arms; the result is embedded back into `R^d` (minimum-norm solution).
fn fit_phase(features: &DMatrix<f64>, arms: &[usize], pulls: &[u64], sums: &[f64]) -> Result<DVector<f64>> {
    let pulled: Vec<usize> = arms
        .iter()
        .zip(pulls)
        .filter(|(_, &n)| n > 0)
        .map(|(&a, _)| a)
        .collect();
    let d = features.ncols();
    let mut rows = DMatrix::zeros(pulled.len(), d);
    for (r, &a) in pulled.iter().enumerate() {
        rows.set_row(r, &features.row(a));
    }
    let basis = crate::design::span_basis(&rows)?;
    let dp = basis.ncols();
    let mut gram = DMatrix::zeros(dp, dp);
    let mut rhs = DVector::zeros(dp);
    for (&a, &n) in arms.iter().zip(pulls) {
        if n == 0 {
            continue;
        }
        let z = basis.transpose() * features.row(a).transpose();
        gram += n as f64 * &z * z.transpose();
        rhs += sums[a] * &z;
    }
    let theta_red = solve_normal_equations(&gram, &rhs)?;
    Ok(basis * theta_red)
}
