use crate::algorithms::AlgorithmChoice;
use crate::error::{invalid, Result};

use super::runner::measure_rho_hat;
use super::spec::ExperimentSpec;

/// Result of a deflation grid search for one algorithm.
#[derive(Debug, Clone, PartialEq)]
pub enum TuneOutcome {
    /// Smallest grid deflation whose `rho_hat` meets the target.
    Found { deflation: f64, rho_hat: f64 },
    /// No grid point met the target.
    NotFound { best_rho_hat: f64, best_deflation: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneReport {
    pub algorithm: AlgorithmChoice,
    pub target_rho: f64,
    pub outcome: TuneOutcome,
    /// `(deflation, rho_hat)` for every grid point evaluated, ascending.
    pub evaluated: Vec<(f64, f64)>,
}

impl TuneReport {
    pub fn deflation(&self) -> Option<f64> {
        match self.outcome {
            TuneOutcome::Found { deflation, .. } => Some(deflation),
            TuneOutcome::NotFound { .. } => None,
        }
    }
}

/// Scans `spec.grid` from the smallest deflation upward and stops at the
/// first point whose bootstrap `rho_hat` is at most `spec.target_rho`.
pub fn tune_deflation(spec: &ExperimentSpec, algorithm: AlgorithmChoice) -> Result<TuneReport> {
    spec.validate()?;
    if algorithm == AlgorithmChoice::Ucb1 {
        return Err(invalid("UCB1 has no decision thresholds to tune"));
    }
    let mut grid = spec.grid.clone();
    grid.sort_by(|a, b| a.total_cmp(b));
    grid.dedup();

    let mut evaluated = Vec::with_capacity(grid.len());
    for &d in &grid {
        let trial = spec.clone().with_deflation(algorithm, d);
        let rho_hat = measure_rho_hat(&trial, algorithm)?;
        evaluated.push((d, rho_hat));
        if rho_hat <= spec.target_rho {
            return Ok(TuneReport {
                algorithm,
                target_rho: spec.target_rho,
                outcome: TuneOutcome::Found { deflation: d, rho_hat },
                evaluated,
            });
        }
    }
    let (best_deflation, best_rho_hat) = evaluated
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("grid is non-empty");
    Ok(TuneReport {
        algorithm,
        target_rho: spec.target_rho,
        outcome: TuneOutcome::NotFound {
            best_rho_hat,
            best_deflation,
        },
        evaluated,
    })
}
