//! Phase schedules and confidence widths shared by every phased algorithm.
//!
//! All logarithms are natural. Phase indices are 1-based, matching the way
//! phases are counted in the elimination rules: phase `p` has accuracy
//! `eps_p = a^-p` and per-arm cumulative budget `N_p = ceil(8 a^(2p) sigma^2)`.

use crate::error::{invalid, Result};

/// Ceiling that forgives floating-point fuzz just above an integer.
///
/// `sqrt(0.5)^2` is `0.5000000000000001`, which would otherwise turn a budget
/// of exactly 16 into 17.
pub(crate) fn fuzzy_ceil(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r
    } else {
        x.ceil()
    }
}

/// Growth base, subgaussian radius, horizon and arm count of a phased run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseParams {
    /// Growth base `a >= 2`.
    pub a: f64,
    /// Subgaussian radius of the reward noise.
    pub sigma: f64,
    /// Number of rounds `T`.
    pub horizon: u64,
    /// Number of arms `K`.
    pub num_arms: usize,
}

impl PhaseParams {
    pub fn new(a: f64, sigma: f64, horizon: u64, num_arms: usize) -> Result<Self> {
        let p = PhaseParams {
            a,
            sigma,
            horizon,
            num_arms,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.a >= 2.0) {
            return Err(invalid(format!("growth base a must be >= 2, got {}", self.a)));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(invalid(format!("sigma must be > 0, got {}", self.sigma)));
        }
        if self.horizon < 1 {
            return Err(invalid("horizon must be >= 1"));
        }
        if self.num_arms < 2 {
            return Err(invalid(format!("need at least 2 arms, got {}", self.num_arms)));
        }
        Ok(())
    }
}

/// Nonreplication budget and threshold knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicationParams {
    /// Total nonreplication budget `rho` in `(0, 1/2]`.
    pub rho: f64,
    /// Budget of the "eliminate all but one" test. Zero disables the test.
    pub rho_all: f64,
    /// Budget of each per-arm elimination test. Zero disables the tests.
    pub rho_each: f64,
    /// Multiplier on the replicability width, at least 9/4.
    pub c_mult: f64,
    /// Multiplier applied to every decision threshold (1 = theoretical).
    pub deflation: f64,
}

impl ReplicationParams {
    pub const DEFAULT_C_MULT: f64 = 2.25;

    /// Explore-then-commit budget: everything on the single commit test.
    pub fn rec(rho: f64) -> Result<Self> {
        let r = ReplicationParams {
            rho,
            rho_all: rho,
            rho_each: 0.0,
            c_mult: Self::DEFAULT_C_MULT,
            deflation: 1.0,
        };
        r.validate(2)?;
        Ok(r)
    }

    /// The successive-elimination split `rho_a = rho/2`, `rho_e = rho/(2(K-1))`.
    pub fn rse_split(rho: f64, num_arms: usize) -> Result<Self> {
        if num_arms < 2 {
            return Err(invalid("need at least 2 arms"));
        }
        let r = ReplicationParams {
            rho,
            rho_all: rho / 2.0,
            rho_each: rho / (2.0 * (num_arms - 1) as f64),
            c_mult: Self::DEFAULT_C_MULT,
            deflation: 1.0,
        };
        r.validate(num_arms)?;
        Ok(r)
    }

    /// Per-arm elimination only (`rho_a = 0`), the whole budget spread over
    /// the `K - 1` per-arm tests.
    pub fn per_arm_only(rho: f64, num_arms: usize) -> Result<Self> {
        if num_arms < 2 {
            return Err(invalid("need at least 2 arms"));
        }
        let r = ReplicationParams {
            rho,
            rho_all: 0.0,
            rho_each: rho / (num_arms - 1) as f64,
            c_mult: Self::DEFAULT_C_MULT,
            deflation: 1.0,
        };
        r.validate(num_arms)?;
        Ok(r)
    }

    pub fn with_deflation(mut self, deflation: f64) -> Self {
        self.deflation = deflation;
        self
    }

    pub fn with_c_mult(mut self, c_mult: f64) -> Self {
        self.c_mult = c_mult;
        self
    }

    /// Checks ranges and that the split does not exceed the total budget.
    pub fn validate(&self, num_arms: usize) -> Result<()> {
        if !(self.rho > 0.0 && self.rho <= 0.5) {
            return Err(invalid(format!("rho must lie in (0, 1/2], got {}", self.rho)));
        }
        for (name, v) in [("rho_all", self.rho_all), ("rho_each", self.rho_each)] {
            if !(0.0..1.0).contains(&v) {
                return Err(invalid(format!("{name} must lie in [0, 1), got {v}")));
            }
        }
        let spent = self.rho_all + (num_arms.saturating_sub(1)) as f64 * self.rho_each;
        if spent > self.rho * (1.0 + 1e-12) {
            return Err(invalid(format!(
                "rho_all + (K-1) rho_each = {spent} exceeds rho = {}",
                self.rho
            )));
        }
        if !(self.c_mult >= 2.25) {
            return Err(invalid(format!("c_mult must be >= 9/4, got {}", self.c_mult)));
        }
        if !(self.deflation.is_finite() && self.deflation > 0.0) {
            return Err(invalid(format!("deflation must be > 0, got {}", self.deflation)));
        }
        Ok(())
    }
}

/// `eps_p = a^-p`.
pub fn eps_of_phase(p: usize, a: f64) -> f64 {
    debug_assert!(p >= 1);
    a.powi(-(p as i32))
}

/// Cumulative per-arm budget `N_p = ceil(8 a^(2p) sigma^2)`.
pub fn phase_budget(p: usize, a: f64, sigma: f64) -> u64 {
    debug_assert!(p >= 1);
    let raw = 8.0 * a.powi(2 * p as i32) * sigma * sigma;
    let c = fuzzy_ceil(raw);
    if c >= u64::MAX as f64 {
        u64::MAX
    } else {
        c as u64
    }
}

/// Smallest `p` whose budget reaches the horizon.
pub fn horizon_phase_count(a: f64, sigma: f64, horizon: u64) -> usize {
    let mut p = 1;
    while phase_budget(p, a, sigma) < horizon {
        p += 1;
    }
    p
}

/// Replicability width `eps * sqrt(log(18 K^2 P / rho) / rho^2)`.
pub fn conf_repr(eps: f64, rho_level: f64, num_arms: f64, phase_count: f64) -> Result<f64> {
    if !(rho_level > 0.0 && rho_level < 1.0) {
        return Err(invalid(format!("rho level must lie in (0, 1), got {rho_level}")));
    }
    let log_term = (18.0 * num_arms * num_arms * phase_count / rho_level).ln();
    Ok(eps * (log_term / (rho_level * rho_level)).sqrt())
}

/// Regret width `eps * sqrt(log(K T P))`.
pub fn conf_reg(eps: f64, num_arms: f64, horizon: f64, phase_count: f64) -> f64 {
    eps * (num_arms * horizon * phase_count).ln().max(0.0).sqrt()
}

/// `min(1, 2 exp(-eps^2 n / (2 sigma^2)))`.
pub fn subgaussian_tail(eps: f64, n: u64, sigma: f64) -> f64 {
    (2.0 * (-(eps * eps) * n as f64 / (2.0 * sigma * sigma)).exp()).min(1.0)
}

/// Phase parameters with the phase count `P` fixed once per configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    params: PhaseParams,
    phase_count: usize,
}

impl Schedule {
    pub fn new(params: PhaseParams) -> Result<Self> {
        params.validate()?;
        let phase_count = horizon_phase_count(params.a, params.sigma, params.horizon);
        Ok(Schedule {
            params,
            phase_count,
        })
    }

    pub fn params(&self) -> &PhaseParams {
        &self.params
    }

    /// `P`, the number of phases whose budget first reaches the horizon.
    pub fn phase_count(&self) -> usize {
        self.phase_count
    }

    pub fn eps(&self, p: usize) -> f64 {
        eps_of_phase(p, self.params.a)
    }

    pub fn budget(&self, p: usize) -> u64 {
        phase_budget(p, self.params.a, self.params.sigma)
    }

    pub fn conf_repr(&self, p: usize, rho_level: f64) -> Result<f64> {
        conf_repr(
            self.eps(p),
            rho_level,
            self.params.num_arms as f64,
            self.phase_count as f64,
        )
    }

    pub fn conf_reg(&self, p: usize) -> f64 {
        conf_reg(
            self.eps(p),
            self.params.num_arms as f64,
            self.params.horizon as f64,
            self.phase_count as f64,
        )
    }

    /// `max(c_mult * conf_repr, conf_reg)`.
    pub fn conf_max(&self, p: usize, rho_level: f64, c_mult: f64) -> Result<f64> {
        Ok((c_mult * self.conf_repr(p, rho_level)?).max(self.conf_reg(p)))
    }
}
