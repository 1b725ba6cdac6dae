//! The pre-drawn reward matrix.
//!
//! Entry `(i, n)` is the reward of the `n`-th pull (counted from 0) of arm
//! `i`. Every entry is derived from a ChaCha8 stream keyed by the dataset
//! seed, with the arm as stream id and a fixed four-word slot per entry, so
//! an entry's value never depends on which other entries were read first.
//! Small matrices are materialized up front; large ones are read on demand.

use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::instance::{BanditInstance, Noise};
use crate::error::{Error, Result};

/// Matrices with at most this many entries are materialized eagerly.
pub const EAGER_ENTRY_LIMIT: u64 = 10_000_000;

const WORDS_PER_ENTRY: u128 = 4;
const TWO_POW_M53: f64 = 1.0 / (1u64 << 53) as f64;

fn arm_stream(seed: u64, arm: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(arm as u64);
    rng
}

/// Consumes exactly one entry slot (two `u64`s) from `rng`.
#[inline]
fn draw_entry(rng: &mut ChaCha8Rng, mean: f64, noise: Noise) -> f64 {
    let x1 = rng.next_u64();
    let x2 = rng.next_u64();
    match noise {
        Noise::Gaussian { sigma } => {
            if sigma == 0.0 {
                return mean;
            }
            // Box-Muller; u1 in (0, 1] keeps the log finite.
            let u1 = ((x1 >> 11) + 1) as f64 * TWO_POW_M53;
            let u2 = (x2 >> 11) as f64 * TWO_POW_M53;
            let z = (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
            mean + sigma * z
        }
        Noise::Bernoulli => {
            let u = (x1 >> 11) as f64 * TWO_POW_M53;
            if u < mean {
                1.0
            } else {
                0.0
            }
        }
    }
}

/// A `K x T` reward matrix drawn from one instance.
#[derive(Debug, Clone)]
pub struct Dataset {
    instance: Arc<BanditInstance>,
    horizon: u64,
    seed: u64,
    /// Row-major `K x T` values when materialized.
    dense: Option<Arc<Vec<f64>>>,
}

/// Draws the dataset for `(instance, horizon, seed)`.
///
/// Materialized when `K * T <= EAGER_ENTRY_LIMIT`, streamed otherwise. Both
/// paths yield the same entries.
pub fn sample_dataset(instance: Arc<BanditInstance>, horizon: u64, seed: u64) -> Result<Dataset> {
    let entries = instance.num_arms() as u64 * horizon;
    let ds = Dataset::streaming(instance, horizon, seed)?;
    Ok(if entries <= EAGER_ENTRY_LIMIT {
        ds.materialize()
    } else {
        ds
    })
}

impl Dataset {
    /// A dataset that computes each entry when it is read.
    pub fn streaming(instance: Arc<BanditInstance>, horizon: u64, seed: u64) -> Result<Self> {
        if horizon < 1 {
            return Err(Error::InvalidParameter("horizon must be >= 1".into()));
        }
        Ok(Dataset {
            instance,
            horizon,
            seed,
            dense: None,
        })
    }

    /// Computes and stores every entry.
    pub fn materialize(mut self) -> Self {
        if self.dense.is_some() {
            return self;
        }
        let k = self.num_arms();
        let t = self.horizon as usize;
        let mut values = Vec::with_capacity(k * t);
        let noise = self.instance.noise();
        for arm in 0..k {
            let mean = self.instance.means()[arm];
            let mut rng = arm_stream(self.seed, arm);
            values.extend((0..t).map(|_| draw_entry(&mut rng, mean, noise)));
        }
        self.dense = Some(Arc::new(values));
        self
    }

    pub fn is_materialized(&self) -> bool {
        self.dense.is_some()
    }

    pub fn instance(&self) -> &Arc<BanditInstance> {
        &self.instance
    }

    pub fn num_arms(&self) -> usize {
        self.instance.num_arms()
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Reward of pull `n` (0-based) of `arm` (0-based).
    pub fn reward_at(&self, arm: usize, n: u64) -> Result<f64> {
        let k = self.num_arms();
        if arm >= k {
            return Err(Error::Index {
                what: "arm",
                index: arm,
                lo: 0,
                hi: k - 1,
            });
        }
        if n >= self.horizon {
            return Err(Error::Index {
                what: "pull",
                index: n as usize,
                lo: 0,
                hi: self.horizon as usize - 1,
            });
        }
        Ok(self.entry_unchecked(arm, n))
    }

    fn entry_unchecked(&self, arm: usize, n: u64) -> f64 {
        match &self.dense {
            Some(v) => v[arm * self.horizon as usize + n as usize],
            None => {
                let mut rng = arm_stream(self.seed, arm);
                rng.set_word_pos(n as u128 * WORDS_PER_ENTRY);
                draw_entry(&mut rng, self.instance.means()[arm], self.instance.noise())
            }
        }
    }

    /// Sequential per-arm reader used by the algorithms.
    pub fn reader(&self) -> RewardReader<'_> {
        RewardReader {
            dataset: self,
            pulls: vec![0; self.num_arms()],
            streams: (0..self.num_arms()).map(|_| None).collect(),
        }
    }
}

/// Hands out `r_{i,0}, r_{i,1}, ...` for each arm in pull order.
pub struct RewardReader<'a> {
    dataset: &'a Dataset,
    pulls: Vec<u64>,
    streams: Vec<Option<ChaCha8Rng>>,
}

impl RewardReader<'_> {
    /// Reward for the next pull of `arm`.
    ///
    /// Panics if the arm has already been pulled `T` times, which no
    /// horizon-respecting algorithm can do.
    #[inline]
    pub fn pull(&mut self, arm: usize) -> f64 {
        let n = self.pulls[arm];
        assert!(n < self.dataset.horizon, "arm {arm} pulled past the horizon");
        self.pulls[arm] = n + 1;
        let ds = self.dataset;
        match &ds.dense {
            Some(v) => v[arm * ds.horizon as usize + n as usize],
            None => {
                let inst = &ds.instance;
                let rng = self.streams[arm].get_or_insert_with(|| arm_stream(ds.seed, arm));
                draw_entry(rng, inst.means()[arm], inst.noise())
            }
        }
    }

    pub fn pulls(&self) -> &[u64] {
        &self.pulls
    }
}
