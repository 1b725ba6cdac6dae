//! Worker pools for run-level parallelism.
//!
//! Results never depend on the worker count: work is indexed by run id and
//! reduced in id order.

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};

/// Environment variable read by the CLI for the default worker count.
pub const WORKERS_ENV: &str = "REPBANDIT_WORKERS";

/// Runs `f` on a dedicated pool with `workers` threads (0 = rayon default).
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Numerical(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// `f(0), ..., f(n-1)` in parallel, returned in index order.
pub fn map_indexed<T: Send>(n: usize, f: impl Fn(usize) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    (0..n).into_par_iter().map(f).collect()
}

/// Parses a worker count; 0 is rejected so that a typo cannot silently pick
/// the machine default.
pub fn parse_workers(s: &str) -> Result<usize> {
    match s.trim().parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(invalid(format!("worker count must be a positive integer, got `{s}`"))),
    }
}
