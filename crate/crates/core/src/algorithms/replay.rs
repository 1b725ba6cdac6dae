//! Rebuilds an arm sequence from a decision log alone.
//!
//! For the phased algorithms the sequence is a deterministic function of the
//! configuration and the decision variables; this module recomputes it
//! without touching any reward, which is how that property is tested.

use nalgebra::DMatrix;

use super::config::{AlgorithmConfig, AlgorithmKind};
use super::trace::DecisionRecord;
use crate::design::{approx_g_optimal, linear_phase_budget, phase_allocation};
use crate::error::{invalid, Error, Result};
use crate::schedule::Schedule;

struct Counter {
    horizon: usize,
    arms: Vec<u32>,
    counts: Vec<u64>,
}

impl Counter {
    fn full(&self) -> bool {
        self.arms.len() >= self.horizon
    }

    fn round_robin(&mut self, arms: &[usize], targets: &[u64]) -> bool {
        let mut done = vec![0u64; arms.len()];
        loop {
            let mut progressed = false;
            for (j, &a) in arms.iter().enumerate() {
                if done[j] < targets[j] {
                    if self.full() {
                        return false;
                    }
                    self.arms.push(a as u32);
                    self.counts[a] += 1;
                    done[j] += 1;
                    progressed = true;
                }
            }
            if !progressed {
                return true;
            }
        }
    }

    fn exploit(&mut self, arm: usize) {
        let left = self.horizon - self.arms.len();
        self.arms.extend(std::iter::repeat(arm as u32).take(left));
    }
}

/// Replays `decisions` under `cfg`. For RLSE, `None` means standard basis
/// features, as in [`run_rlse`](super::run_rlse) on a plain instance.
pub fn replay_arms(
    cfg: &AlgorithmConfig,
    decisions: &[DecisionRecord],
    features: Option<&DMatrix<f64>>,
) -> Result<Vec<u32>> {
    let sched = Schedule::new(cfg.phase)?;
    let k = cfg.phase.num_arms;
    let mut c = Counter {
        horizon: cfg.phase.horizon as usize,
        arms: Vec::with_capacity(cfg.phase.horizon as usize),
        counts: vec![0; k],
    };
    if cfg.kind == AlgorithmKind::Ucb1 {
        return Err(invalid("UCB1 has no decision variables to replay"));
    }
    let identity;
    let features = match features {
        Some(f) => f,
        None => {
            identity = DMatrix::identity(k, k);
            &identity
        }
    };

    let mut active: Vec<usize> = (0..k).collect();
    let mut cursor = 0;
    let mut p = 1;
    while !c.full() {
        if active.len() == 1 {
            c.exploit(active[0]);
            break;
        }
        let complete = if cfg.kind == AlgorithmKind::Rlse {
            let design = approx_g_optimal(features, &active)?;
            let n_lin = linear_phase_budget(p, cfg.phase.a, cfg.phase.sigma, features.ncols());
            c.round_robin(&design.arms, &phase_allocation(&design, n_lin))
        } else {
            let target = sched.budget(p);
            let targets: Vec<u64> = active.iter().map(|&a| target.saturating_sub(c.counts[a])).collect();
            c.round_robin(&active, &targets)
        };
        if !complete {
            break;
        }
        let mut next = active.clone();
        while let Some(d) = decisions.get(cursor).filter(|d| d.phase == p) {
            cursor += 1;
            if !d.fired {
                continue;
            }
            match (d.slot, d.kept) {
                (0, Some(kept)) => next = vec![kept],
                (0, None) => return Err(invalid(format!("phase {p}: fired slot-0 record without a kept arm"))),
                (s, _) => next.retain(|&a| a + 1 != s),
            }
        }
        if next.is_empty() {
            return Err(invalid(format!("phase {p}: decision log eliminates every arm")));
        }
        active = next;
        p += 1;
    }
    if cursor != decisions.len() {
        return Err(Error::InvalidParameter(format!(
            "{} decision records were never reached",
            decisions.len() - cursor
        )));
    }
    Ok(c.arms)
}
