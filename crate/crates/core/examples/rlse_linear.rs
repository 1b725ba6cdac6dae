//! RLSE against RSE on twenty arms spread over the unit circle.

use std::sync::Arc;

use replicable_bandits::algorithms::{run, AlgorithmConfig, SharedRandomness};
use replicable_bandits::environments::Dataset;
use replicable_bandits::experiments::{regret_from_counts, unit_circle};
use replicable_bandits::schedule::PhaseParams;

fn main() -> replicable_bandits::Result<()> {
    let sigma = 0.5f64.sqrt();
    let inst = Arc::new(unit_circle(20, 0.1, sigma)?);
    let params = PhaseParams::new(2.0, sigma, 10_000, 20)?;
    let rse = AlgorithmConfig::rse(params, 0.3)?.with_deflation(0.0093);
    let rlse = AlgorithmConfig::rlse(params, 0.3)?.with_deflation(0.0039);

    for cfg in [&rse, &rlse] {
        let mut total = 0.0;
        let runs = 20;
        for seed in 0..runs {
            let ds = Dataset::streaming(inst.clone(), params.horizon, seed)?;
            let trace = run(&ds, cfg, &SharedRandomness::new(seed))?;
            total += regret_from_counts(&trace.pull_counts, inst.means())?;
        }
        println!("{}: mean regret over {runs} runs = {:.1}", cfg.label(), total / runs as f64);
    }
    Ok(())
}
