use sha2::{Digest, Sha256};

use super::config::AlgorithmKind;

/// One evaluated decision variable `d_{p,slot}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DecisionRecord {
    /// 1-based phase.
    pub phase: usize,
    /// 0 for the keep-only-the-best test, `i + 1` for the test of arm `i`.
    pub slot: usize,
    pub fired: bool,
    /// Arm kept when slot 0 fires.
    pub kept: Option<usize>,
}

/// Full record of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub kind: AlgorithmKind,
    /// Arm played in each round, 0-based; length `T`.
    pub arms: Vec<u32>,
    /// Decision variables in evaluation order.
    pub decisions: Vec<DecisionRecord>,
    /// `A_p` for every phase that started, in phase order. When exploitation
    /// begins the singleton set is appended.
    pub active_sets: Vec<Vec<usize>>,
    /// Arm played for the rest of the horizon once a single arm remains.
    pub commit_arm: Option<usize>,
    /// Phase at whose end the commit happened.
    pub commit_phase: Option<usize>,
    pub pull_counts: Vec<u64>,
    /// Last computed empirical means (0 for arms never estimated).
    pub emp_means: Vec<f64>,
}

pub type Fingerprint = [u8; 32];

impl RunTrace {
    pub fn horizon(&self) -> usize {
        self.arms.len()
    }

    /// SHA-256 of the arm sequence.
    pub fn fingerprint(&self) -> Fingerprint {
        fingerprint_arms(&self.arms)
    }

    /// Phase at the end of which `arm` left the active set.
    pub fn elimination_phase(&self, arm: usize) -> Option<usize> {
        self.active_sets
            .windows(2)
            .enumerate()
            .find(|(_, w)| w[0].contains(&arm) && !w[1].contains(&arm))
            .map(|(i, _)| i + 1)
    }
}

pub fn fingerprint_arms(arms: &[u32]) -> Fingerprint {
    let mut h = Sha256::new();
    for a in arms {
        h.update(a.to_le_bytes());
    }
    h.finalize().into()
}
