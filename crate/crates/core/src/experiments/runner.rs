//! Regret experiments.
//!
//! Run `r` of every algorithm reads the dataset with seed
//! `split(split(seed, 1), r)`, so algorithms are compared on common data.
//! Runs are split into `u_groups` contiguous blocks and block `g` uses the
//! internal randomness `split(split(seed, 0), g)`. Within a block the spread
//! of arm sequences is a bootstrap estimate of nonreplication; `rho_hat`
//! averages the blocks.

use rayon::prelude::*;

use crate::algorithms::{self, AlgorithmChoice, Fingerprint, SharedRandomness};
use crate::environments::Dataset;
use crate::error::Result;
use crate::randomness::split_seed;
use crate::replication::bootstrap_rho_fingerprints;

use super::checks::trace_violations;
use super::regret::regret_curve;
use super::spec::ExperimentSpec;

/// Runs are reduced in fixed blocks of this many ids, so sums do not depend
/// on how the work was scheduled.
const CHUNK: usize = 32;

/// Curve points are kept for every round up to this horizon.
pub const FULL_CURVE_LIMIT: u64 = 10_000;
/// Stride of stored curve points beyond [`FULL_CURVE_LIMIT`].
pub const CURVE_STRIDE: u64 = 10;

/// Rounds `t` (1-based) at which curves are stored.
pub fn curve_rounds(horizon: u64) -> Vec<u64> {
    if horizon <= FULL_CURVE_LIMIT {
        (1..=horizon).collect()
    } else {
        let mut ts: Vec<u64> = (1..=horizon / CURVE_STRIDE).map(|j| j * CURVE_STRIDE).collect();
        if horizon % CURVE_STRIDE != 0 {
            ts.push(horizon);
        }
        ts
    }
}

pub fn shared_randomness(seed: u64, group: usize) -> SharedRandomness {
    SharedRandomness::new(split_seed(split_seed(seed, 0), group as u64))
}

/// Block of run `run` when `runs` runs are split into `groups` blocks.
pub fn u_group_of(run: usize, runs: usize, groups: usize) -> usize {
    run * groups / runs
}

/// Mean of the per-block bootstrap estimates; `prints` is in run order.
pub fn grouped_rho_hat(prints: &[Fingerprint], groups: usize) -> f64 {
    let n = prints.len();
    let mut total = 0.0;
    let mut start = 0;
    for g in 0..groups {
        let end = (start..n).find(|&r| u_group_of(r, n, groups) != g).unwrap_or(n);
        total += bootstrap_rho_fingerprints(&prints[start..end]);
        start = end;
    }
    total / groups as f64
}

pub fn run_dataset_seed(seed: u64, run: usize) -> u64 {
    split_seed(split_seed(seed, 1), run as u64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub t: u64,
    pub mean_regret: f64,
    pub half_width: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmResult {
    pub algorithm: AlgorithmChoice,
    pub deflation: f64,
    pub mean_final_regret: f64,
    pub sd_final_regret: f64,
    /// `2 sd / sqrt(runs)`.
    pub half_width: f64,
    pub rho_hat: f64,
    pub curve: Vec<CurvePoint>,
    /// Runs that ended committed to (or with only) a suboptimal arm.
    pub wrong_commits: usize,
    /// Property violations found in individual traces.
    pub violations: Vec<String>,
}

impl AlgorithmResult {
    pub fn band(&self) -> (f64, f64) {
        (
            self.mean_final_regret - self.half_width,
            self.mean_final_regret + self.half_width,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub spec: ExperimentSpec,
    pub results: Vec<AlgorithmResult>,
}

impl ExperimentReport {
    pub fn result(&self, algorithm: AlgorithmChoice) -> Option<&AlgorithmResult> {
        self.results.iter().find(|r| r.algorithm == algorithm)
    }

    pub fn violation_count(&self) -> usize {
        self.results.iter().map(|r| r.violations.len()).sum()
    }
}

struct RunOutput {
    final_regret: f64,
    fingerprint: Fingerprint,
    wrong_commit: bool,
    violations: Vec<String>,
}

struct ChunkOutput {
    runs: Vec<RunOutput>,
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
}

/// Runs every algorithm in `spec` on the current rayon pool.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    let results = spec
        .algorithms
        .iter()
        .map(|&alg| run_algorithm(spec, alg))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentReport {
        spec: spec.clone(),
        results,
    })
}

fn run_algorithm(spec: &ExperimentSpec, alg: AlgorithmChoice) -> Result<AlgorithmResult> {
    let cfg = spec.config_for(alg)?;
    let ts = curve_rounds(spec.horizon);
    let means = spec.instance.means();
    let best = spec.instance.best_mean();

    let n_chunks = spec.runs.div_ceil(CHUNK);
    let chunks: Vec<ChunkOutput> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut out = ChunkOutput {
                runs: Vec::with_capacity(CHUNK),
                sum: vec![0.0; ts.len()],
                sum_sq: vec![0.0; ts.len()],
            };
            for r in c * CHUNK..((c + 1) * CHUNK).min(spec.runs) {
                let ds = Dataset::streaming(spec.instance.clone(), spec.horizon, run_dataset_seed(spec.seed, r))?;
                let u = shared_randomness(spec.seed, u_group_of(r, spec.runs, spec.u_groups));
                let trace = algorithms::run(&ds, &cfg, &u)?;
                let curve = regret_curve(&trace, means)?;
                for (j, &t) in ts.iter().enumerate() {
                    let v = curve.values[t as usize - 1];
                    out.sum[j] += v;
                    out.sum_sq[j] += v * v;
                }
                let violations = trace_violations(&trace, &cfg, &spec.instance)?
                    .into_iter()
                    .map(|m| format!("run {r}: {m}"))
                    .collect();
                out.runs.push(RunOutput {
                    final_regret: curve.final_regret,
                    fingerprint: trace.fingerprint(),
                    wrong_commit: trace.commit_arm.is_some_and(|a| means[a] < best),
                    violations,
                });
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;

    let n = spec.runs as f64;
    let mut sum = vec![0.0; ts.len()];
    let mut sum_sq = vec![0.0; ts.len()];
    let mut finals = Vec::with_capacity(spec.runs);
    let mut prints = Vec::with_capacity(spec.runs);
    let mut wrong_commits = 0;
    let mut violations = Vec::new();
    for chunk in chunks {
        for j in 0..ts.len() {
            sum[j] += chunk.sum[j];
            sum_sq[j] += chunk.sum_sq[j];
        }
        for run in chunk.runs {
            finals.push(run.final_regret);
            prints.push(run.fingerprint);
            wrong_commits += run.wrong_commit as usize;
            violations.extend(run.violations);
        }
    }

    let curve = ts
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            let mean = sum[j] / n;
            let var = ((sum_sq[j] - n * mean * mean) / (n - 1.0)).max(0.0);
            CurvePoint {
                t,
                mean_regret: mean,
                half_width: 2.0 * var.sqrt() / n.sqrt(),
            }
        })
        .collect();
    let mean = finals.iter().sum::<f64>() / n;
    let sd = (finals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();

    Ok(AlgorithmResult {
        algorithm: alg,
        deflation: cfg.rep.deflation,
        mean_final_regret: mean,
        sd_final_regret: sd,
        half_width: 2.0 * sd / n.sqrt(),
        rho_hat: grouped_rho_hat(&prints, spec.u_groups),
        curve,
        wrong_commits,
        violations,
    })
}

/// Bootstrap `rho_hat` of one algorithm under `spec`, without regret
/// bookkeeping. Uses the same randomness and datasets as
/// [`run_experiment`].
pub fn measure_rho_hat(spec: &ExperimentSpec, alg: AlgorithmChoice) -> Result<f64> {
    let cfg = spec.config_for(alg)?;
    let prints: Vec<Fingerprint> = (0..spec.runs)
        .into_par_iter()
        .map(|r| {
            let u = shared_randomness(spec.seed, u_group_of(r, spec.runs, spec.u_groups));
            let ds = Dataset::streaming(spec.instance.clone(), spec.horizon, run_dataset_seed(spec.seed, r))?;
            Ok(algorithms::run(&ds, &cfg, &u)?.fingerprint())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(grouped_rho_hat(&prints, spec.u_groups))
}
