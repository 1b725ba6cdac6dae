//! Replicable stochastic multi-armed bandits.
//!
//! The phased algorithms here (explore-then-commit, successive elimination
//! and its linear counterpart) make every data-dependent choice at phase
//! ends, against thresholds jittered by shared uniforms. Two runs that share
//! the internal randomness but see independent reward datasets then play the
//! same arm sequence with high probability.
//!
//! * [`schedule`]: phase budgets and confidence widths
//! * [`environments`]: bandit instances, reward matrices, gap estimators
//! * [`algorithms`]: REC, RSE, RLSE, UCB1, traces and replay
//! * [`design`]: approximate G-optimal designs and least squares
//! * [`replication`]: paired runs and nonreplication estimates
//! * [`experiments`]: regret curves, the model experiments, tuning, z-test
//! * [`cli`]: the `repbandit` command line

pub mod algorithms;
pub mod cli;
pub mod design;
pub mod environments;
pub mod error;
pub mod experiments;
pub mod kv;
pub mod parallel;
pub mod randomness;
pub mod replication;
pub mod schedule;

pub use error::{Error, Result};
