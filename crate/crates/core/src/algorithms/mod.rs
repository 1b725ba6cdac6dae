//! Phased replicable algorithms and the UCB1 baseline.
//!
//! Arms are 0-based throughout. Every phased run records each evaluated
//! decision variable, which is enough to rebuild its arm sequence
//! ([`replay_arms`]) and to attribute divergences between paired runs.

mod config;
mod rec;
mod replay;
mod rlse;
mod rse;
mod runner;
mod trace;
pub mod trace_io;
mod ucb1;

pub use config::{AlgorithmChoice, AlgorithmConfig, AlgorithmKind, RseMode};
pub use rec::run_rec;
pub use replay::replay_arms;
pub use rlse::run_rlse;
pub use rse::run_rse;
pub use trace::{fingerprint_arms, DecisionRecord, Fingerprint, RunTrace};
pub use ucb1::run_ucb1;

pub use crate::randomness::SharedRandomness;

use crate::environments::Dataset;
use crate::error::{invalid, Result};

fn check_inputs(ds: &Dataset, cfg: &AlgorithmConfig, expected: AlgorithmKind) -> Result<()> {
    cfg.validate()?;
    if cfg.kind != expected {
        return Err(invalid(format!("config is for {:?}, not {:?}", cfg.kind, expected)));
    }
    if cfg.phase.num_arms != ds.num_arms() {
        return Err(invalid(format!(
            "config has {} arms but the dataset has {}",
            cfg.phase.num_arms,
            ds.num_arms()
        )));
    }
    if cfg.phase.horizon != ds.horizon() {
        return Err(invalid(format!(
            "config horizon {} differs from dataset horizon {}",
            cfg.phase.horizon,
            ds.horizon()
        )));
    }
    Ok(())
}

/// Runs whichever algorithm `cfg` names. UCB1 ignores `u`.
pub fn run(ds: &Dataset, cfg: &AlgorithmConfig, u: &SharedRandomness) -> Result<RunTrace> {
    match cfg.kind {
        AlgorithmKind::Rec => run_rec(ds, cfg, u),
        AlgorithmKind::Rse => run_rse(ds, cfg, u),
        AlgorithmKind::Rlse => run_rlse(ds, cfg, u),
        AlgorithmKind::Ucb1 => run_ucb1(ds, cfg),
    }
}
