use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{invalid, Result};

/// Outcome of the two-sample z-test `z = sqrt(n1 + n2) (m1 - m2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZTest {
    pub z: f64,
    pub threshold: f64,
    pub reject: bool,
}

/// Rejects equal means when `|z|` strictly exceeds the two-sided normal
/// quantile at `p_level / 2`; `p_level = 0.05` gives a threshold of about
/// 2.2414.
pub fn z_replicable_test(n1: u64, n2: u64, m1: f64, m2: f64, p_level: f64) -> Result<ZTest> {
    if n1 < 1 || n2 < 1 {
        return Err(invalid("sample counts must be >= 1"));
    }
    if !(p_level > 0.0 && p_level < 1.0) {
        return Err(invalid(format!("p level must lie in (0, 1), got {p_level}")));
    }
    if !(m1.is_finite() && m2.is_finite()) {
        return Err(invalid("means must be finite"));
    }
    let z = ((n1 + n2) as f64).sqrt() * (m1 - m2);
    let threshold = z_threshold(p_level);
    Ok(ZTest {
        z,
        threshold,
        reject: z.abs() > threshold,
    })
}

pub fn z_threshold(p_level: f64) -> f64 {
    Normal::standard().inverse_cdf(1.0 - p_level / 4.0)
}
