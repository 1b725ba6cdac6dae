use crate::algorithms::RunTrace;
use crate::error::{invalid, Result};

/// Cumulative regret `Regret(t) = sum_{s <= t} (mu_max - mu_{I_s})`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretCurve {
    /// `values[t - 1]` is `Regret(t)`.
    pub values: Vec<f64>,
    pub final_regret: f64,
}

fn check_arms(arms: &[u32], k: usize) -> Result<()> {
    match arms.iter().find(|&&a| a as usize >= k) {
        Some(a) => Err(invalid(format!("arm {a} out of range for {k} means"))),
        None => Ok(()),
    }
}

pub fn regret_curve(trace: &RunTrace, means: &[f64]) -> Result<RegretCurve> {
    regret_curve_of_arms(&trace.arms, means)
}

pub fn regret_curve_of_arms(arms: &[u32], means: &[f64]) -> Result<RegretCurve> {
    check_arms(arms, means.len())?;
    let best = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let gaps: Vec<f64> = means.iter().map(|m| best - m).collect();
    let mut acc = 0.0;
    let values: Vec<f64> = arms
        .iter()
        .map(|&a| {
            acc += gaps[a as usize];
            acc
        })
        .collect();
    Ok(RegretCurve {
        final_regret: values.last().copied().unwrap_or(0.0),
        values,
    })
}

/// `sum_i Delta_i N_i(T)`.
pub fn regret_from_counts(counts: &[u64], means: &[f64]) -> Result<f64> {
    if counts.len() != means.len() {
        return Err(invalid(format!(
            "{} pull counts for {} means",
            counts.len(),
            means.len()
        )));
    }
    let best = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(counts.iter().zip(means).map(|(&n, m)| (best - m) * n as f64).sum())
}

/// True when the two regret formulas agree to `tol` relative to the larger
/// magnitude (absolute below 1).
pub fn regret_identity_holds(curve_final: f64, from_counts: f64, tol: f64) -> bool {
    (curve_final - from_counts).abs() <= tol * curve_final.abs().max(from_counts.abs()).max(1.0)
}
