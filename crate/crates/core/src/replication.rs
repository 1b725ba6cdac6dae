//! Paired runs, nonreplication estimates, and divergence attribution.
//!
//! A pair runs one algorithm twice with the same internal randomness on two
//! independently drawn datasets and compares the arm sequences. The share of
//! pairs whose sequences differ estimates the nonreplication probability.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::algorithms::{self, fingerprint_arms, AlgorithmConfig, AlgorithmKind, Fingerprint, RunTrace};
use crate::environments::{BanditInstance, Dataset};
use crate::error::{invalid, Result};
use crate::randomness::{split_seed, SharedRandomness};

/// Where two runs of a pair first part ways.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Divergence {
    /// First decision variable `d_{phase,slot}` whose value differs.
    Decision { phase: usize, slot: usize },
    /// First round (1-based) with different arms, when no decision differs.
    Round(u64),
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Divergence::Decision { phase, slot } => write!(f, "decision,{phase},{slot}"),
            Divergence::Round(t) => write!(f, "round,{t},"),
        }
    }
}

/// Seeds derived from one pair seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairSeeds {
    pub shared: u64,
    pub data_a: u64,
    pub data_b: u64,
}

impl PairSeeds {
    pub fn derive(pair_seed: u64) -> Self {
        PairSeeds {
            shared: split_seed(pair_seed, 0),
            data_a: split_seed(pair_seed, 1),
            data_b: split_seed(pair_seed, 2),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairedOutcome {
    pub trace_a: RunTrace,
    pub trace_b: RunTrace,
    /// Arm sequences are equal element-wise.
    pub identical: bool,
    pub first_divergence: Option<Divergence>,
}

impl PairedOutcome {
    pub fn from_traces(trace_a: RunTrace, trace_b: RunTrace) -> Self {
        let identical = trace_a.arms == trace_b.arms;
        let first_divergence = if identical {
            None
        } else {
            Some(locate(&trace_a, &trace_b))
        };
        PairedOutcome {
            trace_a,
            trace_b,
            identical,
            first_divergence,
        }
    }

    /// Sequences differ although a phased algorithm logged identical
    /// decisions, which would mean the decisions do not determine the arms.
    pub fn contract_violation(&self) -> bool {
        !self.identical
            && self.trace_a.kind != AlgorithmKind::Ucb1
            && self.trace_a.decisions == self.trace_b.decisions
    }

    pub fn summary(&self) -> PairSummary {
        PairSummary {
            identical: self.identical,
            divergence: self.first_divergence,
            contract_violation: self.contract_violation(),
        }
    }
}

/// The part of a [`PairedOutcome`] that reports aggregate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairSummary {
    pub identical: bool,
    pub divergence: Option<Divergence>,
    pub contract_violation: bool,
}

fn first_decision_mismatch(a: &RunTrace, b: &RunTrace) -> Option<Divergence> {
    let (da, db) = (&a.decisions, &b.decisions);
    for (x, y) in da.iter().zip(db) {
        if x != y {
            let (phase, slot) = (x.phase, x.slot).min((y.phase, y.slot));
            return Some(Divergence::Decision { phase, slot });
        }
    }
    // One log extends the other: the first extra record is where they split.
    let extra = if da.len() > db.len() { da.get(db.len()) } else { db.get(da.len()) };
    extra.map(|d| Divergence::Decision {
        phase: d.phase,
        slot: d.slot,
    })
}

fn first_round_mismatch(a: &RunTrace, b: &RunTrace) -> Option<u64> {
    a.arms
        .iter()
        .zip(&b.arms)
        .position(|(x, y)| x != y)
        .or((a.arms.len() != b.arms.len()).then(|| a.arms.len().min(b.arms.len())))
        .map(|t| t as u64 + 1)
}

fn locate(a: &RunTrace, b: &RunTrace) -> Divergence {
    first_decision_mismatch(a, b)
        .or_else(|| first_round_mismatch(a, b).map(Divergence::Round))
        .unwrap_or(Divergence::Round(0))
}

/// First differing decision variable in `(phase, slot)` order, or the first
/// differing round when the logs agree.
pub fn attribute_divergence(outcome: &PairedOutcome) -> Result<Divergence> {
    if outcome.identical {
        return Err(invalid("identical runs have no divergence to attribute"));
    }
    Ok(locate(&outcome.trace_a, &outcome.trace_b))
}

/// Runs `cfg` twice with shared randomness on two independent datasets.
pub fn paired_run(cfg: &AlgorithmConfig, instance: &Arc<BanditInstance>, pair_seed: u64) -> Result<PairedOutcome> {
    let seeds = PairSeeds::derive(pair_seed);
    let u = SharedRandomness::new(seeds.shared);
    let horizon = cfg.phase.horizon;
    let da = Dataset::streaming(instance.clone(), horizon, seeds.data_a)?;
    let db = Dataset::streaming(instance.clone(), horizon, seeds.data_b)?;
    let ta = algorithms::run(&da, cfg, &u)?;
    let tb = algorithms::run(&db, cfg, &u)?;
    Ok(PairedOutcome::from_traces(ta, tb))
}

/// Seed of pair `index` under `master_seed`.
pub fn pair_seed(master_seed: u64, index: u64) -> u64 {
    split_seed(split_seed(master_seed, 0), index)
}

/// `n_pairs` paired runs on the current rayon pool, in pair order.
pub fn run_pairs(
    cfg: &AlgorithmConfig,
    instance: &Arc<BanditInstance>,
    master_seed: u64,
    n_pairs: usize,
) -> Result<Vec<PairSummary>> {
    (0..n_pairs)
        .into_par_iter()
        .map(|j| paired_run(cfg, instance, pair_seed(master_seed, j as u64)).map(|o| o.summary()))
        .collect()
}

/// `runs` single runs, each on its own dataset, split into `groups`
/// contiguous blocks that each share one draw of internal randomness.
/// Returns arm-sequence fingerprints in run order.
pub fn shared_randomness_fingerprints(
    cfg: &AlgorithmConfig,
    instance: &Arc<BanditInstance>,
    master_seed: u64,
    runs: usize,
    groups: usize,
) -> Result<Vec<Fingerprint>> {
    if groups == 0 || groups > runs.max(1) {
        return Err(invalid(format!("cannot split {runs} runs into {groups} groups")));
    }
    let root = split_seed(master_seed, 1);
    let u_root = split_seed(root, 0);
    let data_root = split_seed(root, 1);
    (0..runs)
        .into_par_iter()
        .map(|r| {
            let u = SharedRandomness::new(split_seed(u_root, (r * groups / runs) as u64));
            let ds = Dataset::streaming(instance.clone(), cfg.phase.horizon, split_seed(data_root, r as u64))?;
            Ok(algorithms::run(&ds, cfg, &u)?.fingerprint())
        })
        .collect()
}

/// `1 - sum_s (N_s / R)^2` over the counts `N_s` of distinct arm sequences.
pub fn bootstrap_rho(traces: &[RunTrace]) -> f64 {
    let prints: Vec<Fingerprint> = traces.iter().map(|t| fingerprint_arms(&t.arms)).collect();
    bootstrap_rho_fingerprints(&prints)
}

/// [`bootstrap_rho`] on precomputed fingerprints. Empty input gives 0.
pub fn bootstrap_rho_fingerprints(prints: &[Fingerprint]) -> f64 {
    if prints.is_empty() {
        return 0.0;
    }
    let mut counts: HashMap<&Fingerprint, u64> = HashMap::new();
    for f in prints {
        *counts.entry(f).or_default() += 1;
    }
    let r = prints.len() as f64;
    let mut sq: Vec<f64> = counts.values().map(|&n| (n as f64 / r).powi(2)).collect();
    // Sum in a fixed order so the result does not depend on hash iteration.
    sq.sort_by(|a, b| a.total_cmp(b));
    (1.0 - sq.iter().sum::<f64>()).max(0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationReport {
    pub n_pairs: usize,
    pub divergent: usize,
    pub divergence_rate: f64,
    /// Wilson 95% interval for the divergence probability.
    pub interval: (f64, f64),
    pub attribution: BTreeMap<Divergence, usize>,
    pub contract_violations: usize,
    pub bootstrap_rho: Option<f64>,
}

impl ReplicationReport {
    /// Binomial standard error `sqrt(p (1 - p) / n)` at probability `p`.
    pub fn binomial_se(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.n_pairs as f64).sqrt()
    }

    pub fn with_bootstrap(mut self, rho_hat: f64) -> Self {
        self.bootstrap_rho = Some(rho_hat);
        self
    }
}

/// Wilson score interval for `k` successes in `n` trials at confidence
/// `level`.
pub fn wilson_interval(k: usize, n: usize, level: f64) -> (f64, f64) {
    let z = Normal::standard().inverse_cdf(0.5 + level / 2.0);
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if k == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if k as f64 == n { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

pub fn estimate_rho(outcomes: &[PairedOutcome]) -> Result<ReplicationReport> {
    let s: Vec<PairSummary> = outcomes.iter().map(PairedOutcome::summary).collect();
    summarize(&s)
}

/// Aggregates pair summaries; the result does not depend on their order.
pub fn summarize(pairs: &[PairSummary]) -> Result<ReplicationReport> {
    if pairs.is_empty() {
        return Err(invalid("need at least one paired outcome"));
    }
    let mut attribution = BTreeMap::new();
    let mut divergent = 0;
    let mut contract_violations = 0;
    for s in pairs {
        if !s.identical {
            divergent += 1;
            if let Some(d) = s.divergence {
                *attribution.entry(d).or_insert(0) += 1;
            }
        }
        contract_violations += s.contract_violation as usize;
    }
    let n = pairs.len();
    Ok(ReplicationReport {
        n_pairs: n,
        divergent,
        divergence_rate: divergent as f64 / n as f64,
        interval: wilson_interval(divergent, n, 0.95),
        attribution,
        contract_violations,
        bootstrap_rho: None,
    })
}
