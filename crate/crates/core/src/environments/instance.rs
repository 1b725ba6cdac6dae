use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Result};

/// Reward noise family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Noise {
    /// Additive zero-mean Gaussian noise with standard deviation `sigma`.
    Gaussian { sigma: f64 },
    /// Rewards in `{0, 1}` with success probability equal to the arm mean.
    Bernoulli,
}

impl Noise {
    /// Subgaussian radius of the centred reward.
    pub fn subgaussian_radius(&self) -> f64 {
        match *self {
            Noise::Gaussian { sigma } => sigma,
            Noise::Bernoulli => 0.5,
        }
    }
}

/// Arm features `x_i` (rows) and the shared parameter `theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearStructure {
    pub features: DMatrix<f64>,
    pub theta: DVector<f64>,
}

impl LinearStructure {
    pub fn dim(&self) -> usize {
        self.features.ncols()
    }

    pub fn feature(&self, arm: usize) -> DVector<f64> {
        self.features.row(arm).transpose()
    }
}

/// A stochastic bandit model: arm means plus a noise family.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditInstance {
    means: Vec<f64>,
    mean_range: (f64, f64),
    noise: Noise,
    linear: Option<LinearStructure>,
}

impl BanditInstance {
    pub fn gaussian(means: Vec<f64>, sigma: f64) -> Result<Self> {
        Self::new(means, Noise::Gaussian { sigma }, None)
    }

    pub fn bernoulli(means: Vec<f64>) -> Result<Self> {
        Self::new(means, Noise::Bernoulli, None)
    }

    /// Linear model with `means = features * theta`.
    pub fn linear(features: DMatrix<f64>, theta: DVector<f64>, noise: Noise) -> Result<Self> {
        if features.ncols() != theta.len() {
            return Err(invalid(format!(
                "features have {} columns but theta has length {}",
                features.ncols(),
                theta.len()
            )));
        }
        let means: Vec<f64> = (&features * &theta).iter().copied().collect();
        Self::new(means, noise, Some(LinearStructure { features, theta }))
    }

    fn new(means: Vec<f64>, noise: Noise, linear: Option<LinearStructure>) -> Result<Self> {
        if means.len() < 2 {
            return Err(invalid(format!("need at least 2 arms, got {}", means.len())));
        }
        if means.iter().any(|m| !m.is_finite()) {
            return Err(invalid("means must be finite"));
        }
        match noise {
            Noise::Gaussian { sigma } if !(sigma.is_finite() && sigma >= 0.0) => {
                return Err(invalid(format!("noise sigma must be >= 0, got {sigma}")));
            }
            Noise::Bernoulli if means.iter().any(|m| !(0.0..=1.0).contains(m)) => {
                return Err(invalid("Bernoulli means must lie in [0, 1]"));
            }
            _ => {}
        }
        if let Some(lin) = &linear {
            if lin.features.nrows() != means.len() {
                return Err(invalid("feature matrix must have one row per arm"));
            }
            let rank = lin.features.clone().svd(false, false).rank(1e-10);
            if rank != lin.dim() {
                return Err(invalid(format!(
                    "features must span R^{} but have rank {rank}",
                    lin.dim()
                )));
            }
        }
        let lo = means.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(BanditInstance {
            means,
            mean_range: (lo, hi),
            noise,
            linear,
        })
    }

    /// Declares the interval `[lo, hi]` that contains every mean.
    pub fn with_mean_range(mut self, lo: f64, hi: f64) -> Result<Self> {
        if self.means.iter().any(|m| *m < lo || *m > hi) {
            return Err(invalid(format!("means must lie in [{lo}, {hi}]")));
        }
        self.mean_range = (lo, hi);
        Ok(self)
    }

    pub fn num_arms(&self) -> usize {
        self.means.len()
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn mean_range(&self) -> (f64, f64) {
        self.mean_range
    }

    pub fn noise(&self) -> Noise {
        self.noise
    }

    pub fn linear_structure(&self) -> Option<&LinearStructure> {
        self.linear.as_ref()
    }

    pub fn best_mean(&self) -> f64 {
        self.means.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Suboptimality gaps `max_j mu_j - mu_i`.
    pub fn gaps(&self) -> Vec<f64> {
        let best = self.best_mean();
        self.means.iter().map(|m| best - m).collect()
    }

    /// Smallest positive gap, if any arm is suboptimal.
    pub fn min_gap(&self) -> Option<f64> {
        self.gaps()
            .into_iter()
            .filter(|g| *g > 0.0)
            .fold(None, |acc, g| Some(acc.map_or(g, |a: f64| a.min(g))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_means_match_features() {
        let x = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.6, 0.8]);
        let th = DVector::from_vec(vec![0.5, -1.0]);
        let inst = BanditInstance::linear(x, th, Noise::Gaussian { sigma: 0.1 }).unwrap();
        assert!((inst.means()[2] - (0.3 - 0.8)).abs() < 1e-12);
        assert_eq!(inst.linear_structure().unwrap().dim(), 2);
    }

    #[test]
    fn rejects_rank_deficient_features() {
        let x = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 2.0, 4.0, -1.0, -2.0]);
        let th = DVector::from_vec(vec![1.0, 1.0]);
        assert!(BanditInstance::linear(x, th, Noise::Bernoulli).is_err());
    }

    #[test]
    fn bernoulli_means_checked() {
        assert!(BanditInstance::bernoulli(vec![0.5, 1.2]).is_err());
        assert!(BanditInstance::bernoulli(vec![0.5, 0.45]).is_ok());
    }

    #[test]
    fn range_and_gaps() {
        let inst = BanditInstance::gaussian(vec![0.9, 0.8, 0.3], 1.0).unwrap();
        assert_eq!(inst.mean_range(), (0.3, 0.9));
        assert!(inst.clone().with_mean_range(0.5, 1.0).is_err());
        let inst = inst.with_mean_range(0.0, 1.0).unwrap();
        assert_eq!(inst.mean_range(), (0.0, 1.0));
        assert!((inst.min_gap().unwrap() - 0.1).abs() < 1e-12);
        let tie = BanditInstance::gaussian(vec![0.5, 0.5], 1.0).unwrap();
        assert_eq!(tie.min_gap(), None);
    }
}
