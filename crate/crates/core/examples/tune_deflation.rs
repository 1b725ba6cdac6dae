//! Grid search for the smallest deflation whose bootstrap rho_hat meets the
//! target.

use replicable_bandits::algorithms::AlgorithmChoice;
use replicable_bandits::experiments::{model2, tune_deflation, ExperimentSpec, TuneOutcome};

fn main() -> replicable_bandits::Result<()> {
    let grid: Vec<f64> = (0..=24).map(|k| 2f64.powf(-(k as f64) / 4.0)).collect();
    let spec = ExperimentSpec::new("model2", model2())
        .with_runs(200)
        .with_u_groups(10)
        .with_grid(&grid);
    for alg in [AlgorithmChoice::Rec, AlgorithmChoice::Rse] {
        let report = tune_deflation(&spec, alg)?;
        for (d, rho_hat) in &report.evaluated {
            println!("{alg} deflation {d:.4}: rho_hat {rho_hat:.3}");
        }
        match report.outcome {
            TuneOutcome::Found { deflation, rho_hat } => {
                println!("{alg}: tuned deflation {deflation:.4} (rho_hat {rho_hat:.3})")
            }
            TuneOutcome::NotFound { best_deflation, best_rho_hat } => {
                println!("{alg}: no grid point met the target; best {best_deflation:.4} at {best_rho_hat:.3}")
            }
        }
    }
    Ok(())
}
