//! Paired runs: two independent datasets, one shared random string. Counts how
//! often the two arm sequences differ and where the first difference is.

use std::sync::Arc;

use replicable_bandits::algorithms::AlgorithmConfig;
use replicable_bandits::experiments::model1;
use replicable_bandits::replication::{run_pairs, summarize};
use replicable_bandits::schedule::PhaseParams;

fn main() -> replicable_bandits::Result<()> {
    let inst = Arc::new(model1());
    let params = PhaseParams::new(2.0, 0.5f64.sqrt(), 10_000, 10)?;
    for cfg in [
        AlgorithmConfig::rec(params, 0.3)?,
        AlgorithmConfig::rec(params, 0.3)?.with_deflation(0.02),
        AlgorithmConfig::ucb1(params)?,
    ] {
        let report = summarize(&run_pairs(&cfg, &inst, 42, 200)?)?;
        println!(
            "{} deflation {}: {} of {} pairs diverge ({:.3}, 95% interval {:.3}..{:.3})",
            cfg.label(),
            cfg.rep.deflation,
            report.divergent,
            report.n_pairs,
            report.divergence_rate,
            report.interval.0,
            report.interval.1
        );
        for (site, count) in report.attribution.iter().take(5) {
            println!("    {site}: {count}");
        }
    }
    Ok(())
}
