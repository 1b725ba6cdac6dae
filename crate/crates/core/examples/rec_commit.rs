//! REC on a two-armed Gaussian instance: when does it commit, and to which arm?

use std::sync::Arc;

use replicable_bandits::algorithms::{run_rec, AlgorithmConfig, SharedRandomness};
use replicable_bandits::environments::{BanditInstance, Dataset};
use replicable_bandits::schedule::{PhaseParams, Schedule};

fn main() -> replicable_bandits::Result<()> {
    let sigma = 0.5f64.sqrt();
    let inst = Arc::new(BanditInstance::gaussian(vec![0.6, 0.3], sigma)?);
    let params = PhaseParams::new(2.0, sigma, 20_000, 2)?;
    let cfg = AlgorithmConfig::rec(params, 0.3)?.with_deflation(0.05);

    let sched = Schedule::new(params)?;
    println!("phases: {}", sched.phase_count());
    for p in 1..=sched.phase_count() {
        println!("  phase {p}: conf_max = {:.4}", sched.conf_max(p, cfg.rep.rho_all, cfg.rep.c_mult)?);
    }

    for seed in 0..5 {
        let ds = Dataset::streaming(inst.clone(), params.horizon, seed)?;
        let trace = run_rec(&ds, &cfg, &SharedRandomness::new(100 + seed))?;
        println!(
            "seed {seed}: commit arm {:?} at phase {:?}, pulls {:?}",
            trace.commit_arm, trace.commit_phase, trace.pull_counts
        );
    }
    Ok(())
}
