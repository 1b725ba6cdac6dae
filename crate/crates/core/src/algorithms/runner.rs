//! Round bookkeeping shared by the phased algorithms.

use crate::environments::{Dataset, RewardReader};

pub(crate) struct Rounds<'a> {
    reader: RewardReader<'a>,
    horizon: usize,
    pub arms: Vec<u32>,
    pub counts: Vec<u64>,
    pub sums: Vec<f64>,
}

impl<'a> Rounds<'a> {
    pub fn new(ds: &'a Dataset) -> Self {
        let k = ds.num_arms();
        let horizon = ds.horizon() as usize;
        Rounds {
            reader: ds.reader(),
            horizon,
            arms: Vec::with_capacity(horizon),
            counts: vec![0; k],
            sums: vec![0.0; k],
        }
    }

    pub fn exhausted(&self) -> bool {
        self.arms.len() >= self.horizon
    }

    #[inline]
    pub fn pull(&mut self, arm: usize) -> f64 {
        let r = self.reader.pull(arm);
        self.arms.push(arm as u32);
        self.counts[arm] += 1;
        self.sums[arm] += r;
        r
    }

    /// Round-robin over `arms` in the given order until arm `arms[j]` has
    /// received `targets[j]` more pulls. Returns false if the horizon ran out
    /// first.
    pub fn round_robin(&mut self, arms: &[usize], targets: &[u64], mut on_pull: impl FnMut(usize, f64)) -> bool {
        let mut done = vec![0u64; arms.len()];
        loop {
            let mut progressed = false;
            for (j, &arm) in arms.iter().enumerate() {
                if done[j] < targets[j] {
                    if self.exhausted() {
                        return false;
                    }
                    let r = self.pull(arm);
                    on_pull(arm, r);
                    done[j] += 1;
                    progressed = true;
                }
            }
            if !progressed {
                return true;
            }
        }
    }

    /// Brings every arm in `arms` up to `target` cumulative pulls.
    pub fn fill_to(&mut self, arms: &[usize], target: u64) -> bool {
        let targets: Vec<u64> = arms.iter().map(|&a| target.saturating_sub(self.counts[a])).collect();
        self.round_robin(arms, &targets, |_, _| {})
    }

    /// Plays `arm` for every remaining round without reading rewards.
    pub fn exploit(&mut self, arm: usize) {
        let left = self.horizon - self.arms.len();
        self.arms.extend(std::iter::repeat(arm as u32).take(left));
        self.counts[arm] += left as u64;
    }

    pub fn mean(&self, arm: usize) -> f64 {
        if self.counts[arm] == 0 {
            0.0
        } else {
            self.sums[arm] / self.counts[arm] as f64
        }
    }
}
