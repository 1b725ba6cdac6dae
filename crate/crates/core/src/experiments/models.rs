//! Benchmark instances.

use nalgebra::{DMatrix, DVector};

use crate::environments::{BanditInstance, Noise};
use crate::error::{invalid, Result};

/// Reward variance used by the benchmark models.
pub const BENCHMARK_VARIANCE: f64 = 0.5;

/// One good arm at 0.7 and nine at 0.3.
pub fn model1() -> BanditInstance {
    let mut means = vec![0.3; 10];
    means[0] = 0.7;
    BanditInstance::gaussian(means, BENCHMARK_VARIANCE.sqrt())
        .and_then(|i| i.with_mean_range(0.0, 1.0))
        .expect("valid constant instance")
}

/// Means 0.9, 0.8 and 0.3: a close runner-up and one clearly bad arm.
pub fn model2() -> BanditInstance {
    BanditInstance::gaussian(vec![0.9, 0.8, 0.3], BENCHMARK_VARIANCE.sqrt())
        .and_then(|i| i.with_mean_range(0.0, 1.0))
        .expect("valid constant instance")
}

/// `k` unit vectors in the plane with `theta = (1, 0)`.
///
/// Arm 0 sits at angle 0 (mean 1). The other arms are evenly spaced over
/// the angles `[phi, 2 pi - phi]` with `cos phi = 1 - gap`, so the smallest
/// gap is `gap`, attained by arms 1 and `k - 1`.
pub fn unit_circle(k: usize, gap: f64, sigma: f64) -> Result<BanditInstance> {
    if k < 3 {
        return Err(invalid("unit-circle instance needs at least 3 arms"));
    }
    if !(gap > 0.0 && gap < 2.0) {
        return Err(invalid(format!("gap must lie in (0, 2), got {gap}")));
    }
    let phi = (1.0 - gap).acos();
    let step = (2.0 * std::f64::consts::PI - 2.0 * phi) / (k - 2) as f64;
    let mut x = DMatrix::zeros(k, 2);
    x[(0, 0)] = 1.0;
    for j in 0..k - 1 {
        let ang = phi + step * j as f64;
        x[(j + 1, 0)] = ang.cos();
        x[(j + 1, 1)] = ang.sin();
    }
    BanditInstance::linear(x, DVector::from_vec(vec![1.0, 0.0]), Noise::Gaussian { sigma })
}
