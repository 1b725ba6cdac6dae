//! Empirical gap estimators. Ties resolve to the lowest index.

use crate::error::{invalid, Error, Result};

/// Index of the largest value; the lowest index wins ties.
pub fn argmax(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, v) in values.iter().enumerate() {
        match best {
            Some(b) if values[b] >= *v => {}
            _ => best = Some(i),
        }
    }
    best
}

/// Largest minus second-largest value, counted with multiplicity.
pub fn gap_hat(emp_means: &[f64]) -> Result<f64> {
    if emp_means.len() < 2 {
        return Err(invalid("gap estimate needs at least 2 arms"));
    }
    Ok(top_two_gap(emp_means.iter().copied()))
}

/// `max_j mu_j - mu_arm`.
pub fn gap_hat_arm(emp_means: &[f64], arm: usize) -> Result<f64> {
    let Some(&m) = emp_means.get(arm) else {
        return Err(Error::Index {
            what: "arm",
            index: arm,
            lo: 0,
            hi: emp_means.len().saturating_sub(1),
        });
    };
    let best = emp_means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(best - m)
}

pub(crate) fn top_two_gap(values: impl Iterator<Item = f64>) -> f64 {
    let mut first = f64::NEG_INFINITY;
    let mut second = f64::NEG_INFINITY;
    for v in values {
        if v > first {
            second = first;
            first = v;
        } else if v > second {
            second = v;
        }
    }
    first - second
}
