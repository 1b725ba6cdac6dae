//! Structural properties every trace must satisfy.

use crate::algorithms::{replay_arms, AlgorithmConfig, AlgorithmKind, RunTrace};
use crate::environments::BanditInstance;
use crate::error::Result;

use super::regret::{regret_curve, regret_from_counts, regret_identity_holds};

/// Relative tolerance for the two regret formulas.
pub const REGRET_IDENTITY_TOL: f64 = 1e-9;

/// Human-readable list of violated properties; empty when the trace is sound.
pub fn trace_violations(trace: &RunTrace, cfg: &AlgorithmConfig, instance: &BanditInstance) -> Result<Vec<String>> {
    let mut v = Vec::new();
    let t = cfg.phase.horizon as usize;
    if trace.arms.len() != t {
        v.push(format!("trace has {} rounds, expected {t}", trace.arms.len()));
    }
    let total: u64 = trace.pull_counts.iter().sum();
    if total != t as u64 {
        v.push(format!("pull counts sum to {total}, expected {t}"));
    }
    let curve = regret_curve(trace, instance.means())?;
    let direct = regret_from_counts(&trace.pull_counts, instance.means())?;
    if !regret_identity_holds(curve.final_regret, direct, REGRET_IDENTITY_TOL) {
        v.push(format!(
            "cumulative regret {} differs from sum of gap * count {direct}",
            curve.final_regret
        ));
    }
    for w in trace.active_sets.windows(2) {
        if w[1].is_empty() || !w[1].iter().all(|a| w[0].contains(a)) {
            v.push("active sets are not nested and non-empty".into());
            break;
        }
    }
    if cfg.kind != AlgorithmKind::Ucb1 {
        let features = instance.linear_structure().map(|l| &l.features);
        let replayed = replay_arms(cfg, &trace.decisions, features)?;
        if replayed != trace.arms {
            v.push("decision log does not reproduce the arm sequence".into());
        }
    }
    Ok(v)
}
