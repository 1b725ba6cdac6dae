//! Experiment configuration and its file format.
//!
//! ```text
//! model      = model2.cfg        # instance file, relative to this file
//! algorithms = rec, rse, rasmab, ucb1
//! horizon    = 10000
//! runs       = 1000
//! seed       = 7
//! rho        = 0.3
//! a          = 2
//! sigma      = 0.7071            # optional; defaults to the noise radius
//! deflation.rec = 0.125          # optional, one per algorithm
//! grid       = 1, 0.5, 0.25      # tuning grid
//! target_rho = 0.3               # tuning target
//! u_groups   = 1                 # blocks of runs sharing internal randomness
//! ```

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use crate::algorithms::{AlgorithmChoice, AlgorithmConfig};
use crate::environments::{load_instance, BanditInstance};
use crate::error::{invalid, Error, Result};
use crate::kv::KeyValues;
use crate::schedule::PhaseParams;

/// Default deflation grid `1, 1/2, ..., 1/64`.
pub const DEFAULT_GRID: [f64; 7] = [1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625];
pub const DEFAULT_RUNS: usize = 1000;
pub const DEFAULT_HORIZON: u64 = 10_000;
pub const DEFAULT_RHO: f64 = 0.3;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub model_name: String,
    pub instance: Arc<BanditInstance>,
    pub algorithms: Vec<AlgorithmChoice>,
    pub horizon: u64,
    pub runs: usize,
    pub seed: u64,
    pub rho: f64,
    pub a: f64,
    /// Subgaussian radius used by the confidence schedules.
    pub sigma: f64,
    /// Per-algorithm threshold multipliers; absent means 1.
    pub deflation: BTreeMap<AlgorithmChoice, f64>,
    pub grid: Vec<f64>,
    pub target_rho: f64,
    /// Runs are split into this many contiguous blocks; each block shares
    /// one draw of internal randomness and `rho_hat` is the mean of the
    /// per-block bootstrap estimates. 1 means every run shares one draw.
    pub u_groups: usize,
}

impl ExperimentSpec {
    /// Defaults: REC, RSE, the RASMAB-like variant and UCB1 at `T = 10^4`,
    /// 1000 runs, seed 0, `rho = 0.3`, `a = 2`.
    pub fn new(model_name: impl Into<String>, instance: BanditInstance) -> Self {
        let sigma = instance.noise().subgaussian_radius();
        ExperimentSpec {
            model_name: model_name.into(),
            instance: Arc::new(instance),
            algorithms: vec![
                AlgorithmChoice::Rec,
                AlgorithmChoice::Rse,
                AlgorithmChoice::Rasmab,
                AlgorithmChoice::Ucb1,
            ],
            horizon: DEFAULT_HORIZON,
            runs: DEFAULT_RUNS,
            seed: 0,
            rho: DEFAULT_RHO,
            a: 2.0,
            sigma,
            deflation: BTreeMap::new(),
            grid: DEFAULT_GRID.to_vec(),
            target_rho: DEFAULT_RHO,
            u_groups: 1,
        }
    }

    pub fn with_algorithms(mut self, algorithms: &[AlgorithmChoice]) -> Self {
        self.algorithms = algorithms.to_vec();
        self
    }

    pub fn with_horizon(mut self, horizon: u64) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn with_runs(mut self, runs: usize) -> Self {
        self.runs = runs;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = rho;
        self
    }

    pub fn with_u_groups(mut self, groups: usize) -> Self {
        self.u_groups = groups;
        self
    }

    pub fn with_grid(mut self, grid: &[f64]) -> Self {
        self.grid = grid.to_vec();
        self
    }

    pub fn with_deflation(mut self, algorithm: AlgorithmChoice, deflation: f64) -> Self {
        self.deflation.insert(algorithm, deflation);
        self
    }

    pub fn deflation_of(&self, algorithm: AlgorithmChoice) -> f64 {
        self.deflation.get(&algorithm).copied().unwrap_or(1.0)
    }

    pub fn phase_params(&self) -> Result<PhaseParams> {
        PhaseParams::new(self.a, self.sigma, self.horizon, self.instance.num_arms())
    }

    pub fn config_for(&self, algorithm: AlgorithmChoice) -> Result<AlgorithmConfig> {
        let cfg = algorithm
            .config(self.phase_params()?, self.rho)?
            .with_deflation(self.deflation_of(algorithm));
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.algorithms.is_empty() {
            return Err(invalid("no algorithms selected"));
        }
        if self.runs < 2 {
            return Err(invalid(format!("need at least 2 runs, got {}", self.runs)));
        }
        if self.u_groups < 1 || self.runs < 2 * self.u_groups {
            return Err(invalid(format!(
                "need 1 <= u_groups <= runs / 2, got {} groups for {} runs",
                self.u_groups, self.runs
            )));
        }
        if !(self.target_rho > 0.0 && self.target_rho <= 1.0) {
            return Err(invalid(format!("target rho must lie in (0, 1], got {}", self.target_rho)));
        }
        if self.grid.is_empty() || self.grid.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
            return Err(invalid("deflation grid must be non-empty and positive"));
        }
        for &alg in &self.algorithms {
            self.config_for(alg)?;
        }
        Ok(())
    }

    /// Reads an experiment file; `model` is resolved relative to it.
    pub fn load(path: &Path) -> Result<Self> {
        let kv = KeyValues::load(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_key_values(&kv, base)
    }

    pub fn from_key_values(kv: &KeyValues, base_dir: &Path) -> Result<Self> {
        for key in kv.keys() {
            let known = KEYS.contains(&key)
                || key
                    .strip_prefix("deflation.")
                    .is_some_and(|a| a.parse::<AlgorithmChoice>().is_ok());
            if !known {
                return Err(Error::Config {
                    line: 0,
                    msg: format!("unknown key `{key}`"),
                });
            }
        }
        let model = kv
            .get("model")
            .ok_or_else(|| invalid("experiment file needs `model`"))?;
        let model_path = base_dir.join(model);
        let mut spec = ExperimentSpec::new(model_name_of(&model_path), load_instance(&model_path)?);
        spec.apply(kv)?;
        Ok(spec)
    }

    /// Overrides fields with whatever keys `kv` sets.
    pub fn apply(&mut self, kv: &KeyValues) -> Result<()> {
        if let Some(list) = kv.get("algorithms") {
            self.algorithms = parse_algorithms(list)?;
        }
        if let Some(t) = kv.u64("horizon")? {
            self.horizon = t;
        }
        if let Some(r) = kv.u64("runs")? {
            self.runs = r as usize;
        }
        if let Some(s) = kv.u64("seed")? {
            self.seed = s;
        }
        if let Some(r) = kv.f64("rho")? {
            self.rho = r;
        }
        if let Some(a) = kv.f64("a")? {
            self.a = a;
        }
        if let Some(s) = kv.f64("sigma")? {
            self.sigma = s;
        }
        if let Some(g) = kv.f64_list("grid")? {
            self.grid = g;
        }
        if let Some(g) = kv.u64("u_groups")? {
            self.u_groups = g as usize;
        }
        if let Some(t) = kv.f64("target_rho")? {
            self.target_rho = t;
        }
        for key in kv.keys() {
            if let Some(name) = key.strip_prefix("deflation.") {
                let alg: AlgorithmChoice = name.parse()?;
                let d = kv.f64(key)?.unwrap_or(1.0);
                self.deflation.insert(alg, d);
            }
        }
        Ok(())
    }
}

const KEYS: &[&str] = &[
    "model",
    "algorithms",
    "horizon",
    "runs",
    "seed",
    "rho",
    "a",
    "sigma",
    "grid",
    "target_rho",
    "u_groups",
];

/// Comma-separated algorithm names, e.g. `rec,rse`.
pub fn parse_algorithms(list: &str) -> Result<Vec<AlgorithmChoice>> {
    let mut out: Vec<AlgorithmChoice> = Vec::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let alg: AlgorithmChoice = name.parse()?;
        if out.contains(&alg) {
            return Err(invalid(format!("algorithm `{alg}` listed twice")));
        }
        out.push(alg);
    }
    if out.is_empty() {
        return Err(invalid("empty algorithm list"));
    }
    Ok(out)
}

pub fn model_name_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "model".into())
}
