use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::schedule::{PhaseParams, ReplicationParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgorithmKind {
    /// Replicable explore-then-commit.
    Rec,
    /// Replicable successive elimination.
    Rse,
    /// Replicable linear successive elimination.
    Rlse,
    /// Deterministic UCB1 baseline.
    Ucb1,
}

/// How an elimination algorithm spends its nonreplication budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RseMode {
    /// `rho_a = rho/2`, `rho_e = rho/(2(K-1))`.
    Split,
    /// `rho_a = 0`: only per-arm eliminations (the RASMAB-like variant).
    PerArmOnly,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgorithmConfig {
    pub kind: AlgorithmKind,
    pub phase: PhaseParams,
    pub rep: ReplicationParams,
    pub rse_mode: RseMode,
}

impl AlgorithmConfig {
    pub fn rec(phase: PhaseParams, rho: f64) -> Result<Self> {
        Self::build(AlgorithmKind::Rec, phase, ReplicationParams::rec(rho)?, RseMode::Split)
    }

    pub fn rse(phase: PhaseParams, rho: f64) -> Result<Self> {
        let rep = ReplicationParams::rse_split(rho, phase.num_arms)?;
        Self::build(AlgorithmKind::Rse, phase, rep, RseMode::Split)
    }

    /// RSE with the all-but-one test switched off.
    pub fn rse_per_arm_only(phase: PhaseParams, rho: f64) -> Result<Self> {
        let rep = ReplicationParams::per_arm_only(rho, phase.num_arms)?;
        Self::build(AlgorithmKind::Rse, phase, rep, RseMode::PerArmOnly)
    }

    pub fn rlse(phase: PhaseParams, rho: f64) -> Result<Self> {
        let rep = ReplicationParams::rse_split(rho, phase.num_arms)?;
        Self::build(AlgorithmKind::Rlse, phase, rep, RseMode::Split)
    }

    pub fn ucb1(phase: PhaseParams) -> Result<Self> {
        // UCB1 has no decision thresholds; the budget is carried but unused.
        Self::build(AlgorithmKind::Ucb1, phase, ReplicationParams::rec(0.5)?, RseMode::Split)
    }

    /// Explicit budgets, e.g. `(rho, 0)` to reduce RSE to REC.
    pub fn with_rep(kind: AlgorithmKind, phase: PhaseParams, rep: ReplicationParams) -> Result<Self> {
        let mode = if rep.rho_all == 0.0 {
            RseMode::PerArmOnly
        } else {
            RseMode::Split
        };
        Self::build(kind, phase, rep, mode)
    }

    fn build(kind: AlgorithmKind, phase: PhaseParams, rep: ReplicationParams, rse_mode: RseMode) -> Result<Self> {
        let c = AlgorithmConfig {
            kind,
            phase,
            rep,
            rse_mode,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn with_deflation(mut self, deflation: f64) -> Self {
        self.rep.deflation = deflation;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.phase.validate()?;
        self.rep.validate(self.phase.num_arms)?;
        if self.rse_mode == RseMode::PerArmOnly && self.rep.rho_all != 0.0 {
            return Err(invalid("per-arm-only mode requires rho_all = 0"));
        }
        if self.kind == AlgorithmKind::Rec && self.rep.rho_all <= 0.0 {
            return Err(invalid("REC needs a positive commit budget"));
        }
        Ok(())
    }

    /// Short name used in reports: `rec`, `rse`, `rasmab`, `rlse`, `ucb1`.
    pub fn label(&self) -> &'static str {
        match (self.kind, self.rse_mode) {
            (AlgorithmKind::Rec, _) => "rec",
            (AlgorithmKind::Rse, RseMode::Split) => "rse",
            (AlgorithmKind::Rse, RseMode::PerArmOnly) => "rasmab",
            (AlgorithmKind::Rlse, _) => "rlse",
            (AlgorithmKind::Ucb1, _) => "ucb1",
        }
    }
}

/// Algorithm names accepted on the command line and in config files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgorithmChoice {
    Rec,
    Rse,
    /// RSE with `rho_a = 0`.
    Rasmab,
    Rlse,
    Ucb1,
}

impl AlgorithmChoice {
    pub const ALL: [AlgorithmChoice; 5] = [
        AlgorithmChoice::Rec,
        AlgorithmChoice::Rse,
        AlgorithmChoice::Rasmab,
        AlgorithmChoice::Rlse,
        AlgorithmChoice::Ucb1,
    ];

    pub fn config(self, phase: PhaseParams, rho: f64) -> Result<AlgorithmConfig> {
        match self {
            AlgorithmChoice::Rec => AlgorithmConfig::rec(phase, rho),
            AlgorithmChoice::Rse => AlgorithmConfig::rse(phase, rho),
            AlgorithmChoice::Rasmab => AlgorithmConfig::rse_per_arm_only(phase, rho),
            AlgorithmChoice::Rlse => AlgorithmConfig::rlse(phase, rho),
            AlgorithmChoice::Ucb1 => AlgorithmConfig::ucb1(phase),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmChoice::Rec => "rec",
            AlgorithmChoice::Rse => "rse",
            AlgorithmChoice::Rasmab => "rasmab",
            AlgorithmChoice::Rlse => "rlse",
            AlgorithmChoice::Ucb1 => "ucb1",
        }
    }
}

impl fmt::Display for AlgorithmChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| invalid(format!("unknown algorithm `{s}` (expected rec, rse, rasmab, rlse or ucb1)")))
    }
}
