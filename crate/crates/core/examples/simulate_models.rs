//! Regret experiment on both benchmark models, written out the same way as
//! `repbandit simulate`.

use replicable_bandits::algorithms::AlgorithmChoice;
use replicable_bandits::experiments::output::write_summary;
use replicable_bandits::experiments::{model1, model2, run_experiment, ExperimentSpec};

fn main() -> replicable_bandits::Result<()> {
    for (name, inst) in [("model1", model1()), ("model2", model2())] {
        let spec = ExperimentSpec::new(name, inst)
            .with_algorithms(&AlgorithmChoice::ALL)
            .with_runs(100)
            .with_u_groups(5)
            .with_deflation(AlgorithmChoice::Rec, 0.03)
            .with_deflation(AlgorithmChoice::Rse, 0.02)
            .with_deflation(AlgorithmChoice::Rasmab, 0.01)
            .with_deflation(AlgorithmChoice::Rlse, 0.01);
        let report = run_experiment(&spec)?;
        for r in &report.results {
            let (lo, hi) = r.band();
            println!(
                "{name} {:<7} regret {:>8.1} [{lo:.1}, {hi:.1}]  rho_hat {:.3}",
                r.algorithm.name(),
                r.mean_final_regret,
                r.rho_hat
            );
        }
        let mut buf = Vec::new();
        write_summary(&mut buf, &report)?;
        println!("summary.txt would hold {} bytes", buf.len());
    }
    Ok(())
}
