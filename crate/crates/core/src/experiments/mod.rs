//! Regret accounting, benchmark experiments, deflation tuning and the
//! replicable z-test.

mod checks;
pub mod models;
pub mod output;
mod regret;
mod runner;
mod spec;
mod tune;
mod ztest;

pub use checks::{trace_violations, REGRET_IDENTITY_TOL};
pub use models::{model1, model2, unit_circle, BENCHMARK_VARIANCE};
pub use regret::{regret_curve, regret_curve_of_arms, regret_from_counts, regret_identity_holds, RegretCurve};
pub use runner::{
    curve_rounds, grouped_rho_hat, measure_rho_hat, u_group_of, run_dataset_seed, run_experiment, shared_randomness, AlgorithmResult,
    CurvePoint, ExperimentReport, CURVE_STRIDE, FULL_CURVE_LIMIT,
};
pub use spec::{
    model_name_of, parse_algorithms, ExperimentSpec, DEFAULT_GRID, DEFAULT_HORIZON, DEFAULT_RHO, DEFAULT_RUNS,
};
pub use tune::{tune_deflation, TuneOutcome, TuneReport};
pub use ztest::{z_replicable_test, z_threshold, ZTest};
