//! End-to-end acceptance checks. Prints one PASS/FAIL line per check and
//! exits nonzero if any fails.

use std::path::Path;
use std::process::{Command, Stdio};
use std::sync::Arc;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use replicable_bandits::algorithms::{
    self, run_rec, run_rse, AlgorithmChoice, AlgorithmConfig, AlgorithmKind, SharedRandomness,
};
use replicable_bandits::design::{approx_g_optimal, g_value};
use replicable_bandits::environments::{BanditInstance, Dataset};
use replicable_bandits::experiments::{
    model1, model2, regret_curve, regret_curve_of_arms, regret_from_counts, run_experiment, tune_deflation, unit_circle,
    AlgorithmResult, ExperimentSpec, TuneOutcome,
};
use replicable_bandits::replication::{run_pairs, summarize};
use replicable_bandits::schedule::{subgaussian_tail, PhaseParams, ReplicationParams, Schedule};

const RHO: f64 = 0.3;
/// Standard errors allowed above a probability bound.
const SE_MULT: f64 = 3.0;
const REPLICATION_PAIRS: usize = 500;
const ORDERING_RUNS: usize = 1000;
const U_GROUPS: usize = 20;
const EXPERIMENT_SEED: u64 = 1;
/// Deflation grid `2^(-k/4)`, `k = 0..=40`.
const GRID_STEPS: i32 = 40;
/// Schedule radius for the zero-noise commit-phase check.
const ZERO_NOISE_SIGMA: f64 = 0.05;
const ZERO_NOISE_HORIZON: u64 = 10_000_000;
const U_SEEDS: u64 = 100;
const TAIL_TRIALS: usize = 100_000;
const DESIGN_SETS: usize = 20;
const SYMMETRIC_TOL: f64 = 1e-6;
const SPECIALIZATION_CONFIGS: u64 = 100;
const UCB_PAIRS: usize = 200;
const UCB_HORIZON: u64 = 2000;
const UCB_MIN_DIVERGENCE: f64 = 0.4;
const REGRET_TRACES: usize = 10_000;
const REGRET_TOL: f64 = 1e-9;
const RLSE_RUNS: usize = 1000;

struct Check {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Check {
    Check {
        pass,
        detail: detail.into(),
    }
}

fn grid() -> Vec<f64> {
    (0..=GRID_STEPS).map(|k| 2f64.powf(-(k as f64) / 4.0)).collect()
}

fn benchmark_params(k: usize) -> PhaseParams {
    PhaseParams::new(2.0, 0.5f64.sqrt(), 10_000, k).unwrap()
}

fn paired_divergence_at_full_threshold() -> Check {
    let inst = Arc::new(model1());
    let p = benchmark_params(10);
    let limit = RHO + SE_MULT * (RHO * (1.0 - RHO) / REPLICATION_PAIRS as f64).sqrt();
    let mut parts = Vec::new();
    let mut pass = true;
    for cfg in [
        AlgorithmConfig::rec(p, RHO).unwrap(),
        AlgorithmConfig::rse(p, RHO).unwrap(),
        AlgorithmConfig::rlse(p, RHO).unwrap(),
    ] {
        let report = summarize(&run_pairs(&cfg, &inst, 2024, REPLICATION_PAIRS).unwrap()).unwrap();
        pass &= report.divergence_rate <= limit && report.contract_violations == 0;
        parts.push(format!("{} {:.3}", cfg.label(), report.divergence_rate));
    }
    check(pass, format!("model 1, {REPLICATION_PAIRS} pairs: {} (limit {limit:.4})", parts.join(", ")))
}

/// Tunes every non-UCB1 algorithm of `spec` and runs the experiment at the
/// tuned deflations.
fn tuned_report(spec: ExperimentSpec) -> (Vec<AlgorithmResult>, bool, Vec<String>) {
    let mut spec = spec;
    let mut all_found = true;
    let mut notes = Vec::new();
    for alg in spec.algorithms.clone() {
        if alg == AlgorithmChoice::Ucb1 {
            continue;
        }
        let t = tune_deflation(&spec, alg).unwrap();
        match t.outcome {
            TuneOutcome::Found { deflation, .. } => spec = spec.with_deflation(alg, deflation),
            TuneOutcome::NotFound {
                best_deflation,
                best_rho_hat,
            } => {
                all_found = false;
                notes.push(format!("{alg} not tuned (best rho_hat {best_rho_hat:.3})"));
                spec = spec.with_deflation(alg, best_deflation);
            }
        }
    }
    let report = run_experiment(&spec).unwrap();
    (report.results, all_found, notes)
}

fn find(results: &[AlgorithmResult], alg: AlgorithmChoice) -> &AlgorithmResult {
    results.iter().find(|r| r.algorithm == alg).unwrap()
}

fn overlap(a: &AlgorithmResult, b: &AlgorithmResult) -> bool {
    let (a0, a1) = a.band();
    let (b0, b1) = b.band();
    a0 <= b1 && b0 <= a1
}

/// `a` below `b` with disjoint bands.
fn below(a: &AlgorithmResult, b: &AlgorithmResult) -> bool {
    a.band().1 < b.band().0
}

fn describe(results: &[AlgorithmResult]) -> String {
    results
        .iter()
        .map(|r| {
            format!(
                "{} {:.1}+-{:.1} (d {:.4}, rho_hat {:.3})",
                r.algorithm, r.mean_final_regret, r.half_width, r.deflation, r.rho_hat
            )
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn tuned_ordering() -> Check {
    use AlgorithmChoice::*;
    let algs = [Rec, Rse, Rasmab, Ucb1];
    let spec = |name: &str, inst| {
        ExperimentSpec::new(name, inst)
            .with_algorithms(&algs)
            .with_runs(ORDERING_RUNS)
            .with_seed(EXPERIMENT_SEED)
            .with_u_groups(U_GROUPS)
            .with_grid(&grid())
    };
    let (m1, found1, notes1) = tuned_report(spec("model1", model1()));
    let (m2, found2, notes2) = tuned_report(spec("model2", model2()));
    let ucb_lowest = |rs: &[AlgorithmResult]| {
        let u = find(rs, Ucb1);
        rs.iter().filter(|r| r.algorithm != Ucb1).all(|r| below(u, r))
    };
    let tuned_ok = |rs: &[AlgorithmResult]| rs.iter().filter(|r| r.algorithm != Ucb1).all(|r| r.rho_hat <= RHO);
    let m1_ok = overlap(find(&m1, Rec), find(&m1, Rse))
        && below(find(&m1, Rec), find(&m1, Rasmab))
        && below(find(&m1, Rse), find(&m1, Rasmab))
        && ucb_lowest(&m1);
    let m2_ok = below(find(&m2, Rse), find(&m2, Rec)) && ucb_lowest(&m2);
    let mut detail = format!("model 1: {} | model 2: {}", describe(&m1), describe(&m2));
    for n in notes1.iter().chain(&notes2) {
        detail.push_str(&format!(" | {n}"));
    }
    check(found1 && found2 && tuned_ok(&m1) && tuned_ok(&m2) && m1_ok && m2_ok, detail)
}

/// First phase whose width is at most `10 gap / 17`.
fn settle_phase(sched: &Schedule, rho_level: f64, gap: f64) -> usize {
    (1..).find(|&p| sched.conf_max(p, rho_level, 2.25).unwrap() <= 10.0 * gap / 17.0).unwrap()
}

fn commit_phase_oracle() -> Check {
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    let mut cases = 0;
    for means in [vec![1.0, 0.0], vec![0.9, 0.8, 0.3]] {
        let k = means.len();
        let inst = Arc::new(BanditInstance::gaussian(means.clone(), 0.0).unwrap());
        let p = PhaseParams::new(2.0, ZERO_NOISE_SIGMA, ZERO_NOISE_HORIZON, k).unwrap();
        let sched = Schedule::new(p).unwrap();
        let rec = AlgorithmConfig::rec(p, RHO).unwrap();
        let rse = AlgorithmConfig::rse(p, RHO).unwrap();
        let gap = means[0] - means[1];
        let p_s = settle_phase(&sched, rec.rep.rho_all, gap);
        let p_si: Vec<usize> = (1..k)
            .map(|i| settle_phase(&sched, rse.rep.rho_each, means[0] - means[i]))
            .collect();
        if p_s + 2 > sched.phase_count() || p_si.iter().any(|&q| q + 2 > sched.phase_count()) {
            return check(false, format!("horizon too short for means {means:?}"));
        }
        for seed in 0..U_SEEDS {
            let u = SharedRandomness::new(seed);
            let ds = Dataset::streaming(inst.clone(), ZERO_NOISE_HORIZON, seed).unwrap();
            let t = run_rec(&ds, &rec, &u).unwrap();
            let rec_ok = t.commit_arm == Some(0) && t.commit_phase.is_some_and(|c| c <= p_s + 2);
            let t = run_rse(&ds, &rse, &u).unwrap();
            let mut rse_ok = t.commit_arm == Some(0);
            for i in 1..k {
                rse_ok &= t.elimination_phase(i).is_some_and(|e| e <= p_si[i - 1] + 2);
            }
            cases += 1;
            if !(rec_ok && rse_ok) {
                failures.push(format!("{means:?} U seed {seed}"));
            }
        }
        notes.push(format!("{means:?}: p_s {p_s}, p_s,i {p_si:?}"));
    }
    let mut detail = format!("{cases} zero-noise runs per algorithm; {}", notes.join("; "));
    if !failures.is_empty() {
        detail.push_str(&format!("; failed: {}", failures.join(", ")));
    }
    check(failures.is_empty(), detail)
}

fn tail_bound_monte_carlo() -> Check {
    let mut pass = true;
    let mut worst_margin = f64::INFINITY;
    let mut cells = 0;
    for sigma in [0.5, 1.0] {
        let inst = Arc::new(BanditInstance::gaussian(vec![0.0, 0.0], sigma).unwrap());
        for n in [16u64, 64, 256] {
            let ds = Dataset::streaming(inst.clone(), n * TAIL_TRIALS as u64, 77 + n).unwrap();
            let mut reader = ds.reader();
            let means: Vec<f64> = (0..TAIL_TRIALS)
                .map(|_| (0..n).map(|_| reader.pull(0)).sum::<f64>() / n as f64)
                .collect();
            for eps in [0.25, 0.5, 1.0] {
                let hits = means.iter().filter(|m| m.abs() >= eps).count();
                let freq = hits as f64 / TAIL_TRIALS as f64;
                let bound = subgaussian_tail(eps, n, sigma);
                let se = (bound * (1.0 - bound) / TAIL_TRIALS as f64).sqrt();
                let margin = bound + SE_MULT * se - freq;
                worst_margin = worst_margin.min(margin);
                pass &= margin >= 0.0;
                cells += 1;
            }
        }
    }
    check(pass, format!("{cells} cells x {TAIL_TRIALS} trials, smallest slack {worst_margin:.3e}"))
}

fn design_certificate() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut pass = true;
    let mut worst: f64 = 0.0;
    for j in 0..DESIGN_SETS {
        let d = [2, 3, 5][j % 3];
        let k = [10, 50][(j / 3) % 2];
        let x = DMatrix::from_fn(k, d, |_, _| rng.random_range(-1.0..1.0));
        let all: Vec<usize> = (0..k).collect();
        let w = approx_g_optimal(&x, &all).unwrap();
        let g = g_value(&w, &x, &all).unwrap();
        pass &= g <= 2.0 * d as f64;
        worst = worst.max(g / d as f64);
    }
    let mut sym_err: f64 = 0.0;
    for d in [2, 3, 5] {
        let x = DMatrix::identity(d, d);
        let all: Vec<usize> = (0..d).collect();
        let g = g_value(&approx_g_optimal(&x, &all).unwrap(), &x, &all).unwrap();
        sym_err = sym_err.max((g - d as f64).abs());
    }
    pass &= sym_err <= SYMMETRIC_TOL;
    check(
        pass,
        format!("{DESIGN_SETS} random sets, largest g/d {worst:.4} (limit 2); basis |g - d| {sym_err:.2e}"),
    )
}

fn specialization_identity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut mismatches = 0;
    for c in 0..SPECIALIZATION_CONFIGS {
        let k = rng.random_range(2..=8);
        let means: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..1.0)).collect();
        let inst = Arc::new(BanditInstance::gaussian(means, 0.5f64.sqrt()).unwrap());
        let horizon = rng.random_range(500..=20_000);
        let rho = rng.random_range(0.05..=0.5);
        let deflation = 2f64.powf(-rng.random_range(0.0..8.0));
        let p = PhaseParams::new(2.0, 0.5f64.sqrt(), horizon, k).unwrap();
        let rec = AlgorithmConfig::rec(p, rho).unwrap().with_deflation(deflation);
        let rep = ReplicationParams {
            rho,
            rho_all: rho,
            rho_each: 0.0,
            c_mult: ReplicationParams::DEFAULT_C_MULT,
            deflation,
        };
        let rse = AlgorithmConfig::with_rep(AlgorithmKind::Rse, p, rep).unwrap();
        let ds = Dataset::streaming(inst, horizon, c).unwrap();
        let u = SharedRandomness::new(1000 + c);
        let a = run_rec(&ds, &rec, &u).unwrap();
        let b = run_rse(&ds, &rse, &u).unwrap();
        let same = a.arms == b.arms
            && a.decisions == b.decisions
            && a.active_sets == b.active_sets
            && a.commit_arm == b.commit_arm
            && a.pull_counts == b.pull_counts
            && a.emp_means.iter().zip(&b.emp_means).all(|(x, y)| x.to_bits() == y.to_bits());
        mismatches += !same as usize;
    }
    check(mismatches == 0, format!("{SPECIALIZATION_CONFIGS} configurations, {mismatches} mismatches"))
}

fn ucb1_nonreplicable() -> Check {
    let mut best = (0.0, 0.0);
    let mut cells = Vec::new();
    for j in 0..=10 {
        let mu2 = 0.45 + 0.01 * j as f64;
        let inst = Arc::new(BanditInstance::bernoulli(vec![0.5, mu2]).unwrap());
        let cfg = AlgorithmConfig::ucb1(PhaseParams::new(2.0, 0.5, UCB_HORIZON, 2).unwrap()).unwrap();
        let rate = summarize(&run_pairs(&cfg, &inst, 300 + j, UCB_PAIRS).unwrap())
            .unwrap()
            .divergence_rate;
        cells.push(format!("{mu2:.2}:{rate:.2}"));
        if rate > best.1 {
            best = (mu2, rate);
        }
    }
    check(
        best.1 >= UCB_MIN_DIVERGENCE,
        format!("largest divergence {:.3} at mu2 = {:.2} [{}]", best.1, best.0, cells.join(" ")),
    )
}

fn regret_identity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    let algos_every = 20;
    for j in 0..REGRET_TRACES {
        let (arms, means) = if j % algos_every == 0 {
            // Every 20th trace comes from an actual algorithm run.
            let k = rng.random_range(2..=6);
            let means: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
            let inst = Arc::new(BanditInstance::gaussian(means.clone(), 1.0).unwrap());
            let horizon = rng.random_range(100..=3000);
            let p = PhaseParams::new(2.0, 1.0, horizon, k).unwrap();
            let cfg = match (j / algos_every) % 4 {
                0 => AlgorithmConfig::rec(p, RHO).unwrap().with_deflation(0.05),
                1 => AlgorithmConfig::rse(p, RHO).unwrap().with_deflation(0.05),
                2 => AlgorithmConfig::rlse(p, RHO).unwrap().with_deflation(0.05),
                _ => AlgorithmConfig::ucb1(p).unwrap(),
            };
            let ds = Dataset::streaming(inst, horizon, j as u64).unwrap();
            let trace = algorithms::run(&ds, &cfg, &SharedRandomness::new(j as u64)).unwrap();
            let curve = regret_curve(&trace, &means).unwrap();
            let direct = regret_from_counts(&trace.pull_counts, &means).unwrap();
            worst = worst.max((curve.final_regret - direct).abs());
            continue;
        } else {
            let k = rng.random_range(2..=20);
            let means: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
            let len = rng.random_range(1..=2000);
            let arms: Vec<u32> = (0..len).map(|_| rng.random_range(0..k as u32)).collect();
            (arms, means)
        };
        let curve = regret_curve_of_arms(&arms, &means).unwrap();
        let mut counts = vec![0u64; means.len()];
        for &a in &arms {
            counts[a as usize] += 1;
        }
        let direct = regret_from_counts(&counts, &means).unwrap();
        worst = worst.max((curve.final_regret - direct).abs());
    }
    check(worst <= REGRET_TOL, format!("{REGRET_TRACES} traces, largest |difference| {worst:.2e}"))
}

fn simulate_outputs(workers: &str, out: &Path) -> Option<(Vec<u8>, Vec<u8>)> {
    let model = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/model1.cfg");
    let status = Command::new(env!("CARGO_BIN_EXE_repbandit"))
        .args(["simulate", "--model"])
        .arg(&model)
        .args(["--algos", "rec,rse,rasmab,rlse,ucb1", "--T", "10000", "--runs", "200", "--seed", "7"])
        .args(["--deflation", "rec=0.03,rse=0.015,rasmab=0.01,rlse=0.01", "--u-groups", "4"])
        .args(["--workers", workers, "--out-dir"])
        .arg(out)
        .env_remove("REPBANDIT_WORKERS")
        .stdout(Stdio::null())
        .status()
        .ok()?;
    if !status.success() {
        return None;
    }
    Some((std::fs::read(out.join("summary.txt")).ok()?, std::fs::read(out.join("curves.csv")).ok()?))
}

fn end_to_end_determinism() -> Check {
    let dir = std::env::temp_dir().join(format!("repbandit-acceptance-{}", std::process::id()));
    let runs: Vec<_> = [("1", "a"), ("8", "b"), ("1", "c"), ("8", "d")]
        .iter()
        .map(|(w, name)| simulate_outputs(w, &dir.join(name)))
        .collect();
    let _ = std::fs::remove_dir_all(&dir);
    let ok = runs.iter().all(Option::is_some) && runs.windows(2).all(|w| w[0] == w[1]);
    let bytes = runs[0].as_ref().map_or(0, |(s, c)| s.len() + c.len());
    check(ok, format!("4 simulate invocations at workers 1, 8, 1, 8; {bytes} bytes each, identical = {ok}"))
}

fn linear_dimension_benefit() -> Check {
    use AlgorithmChoice::*;
    let spec = ExperimentSpec::new("circle20", unit_circle(20, 0.1, 0.5f64.sqrt()).unwrap())
        .with_algorithms(&[Rse, Rlse])
        .with_runs(RLSE_RUNS)
        .with_seed(EXPERIMENT_SEED)
        .with_u_groups(U_GROUPS)
        .with_grid(&grid());
    let (rs, found, notes) = tuned_report(spec);
    let ok = found && rs.iter().all(|r| r.rho_hat <= RHO) && below(find(&rs, Rlse), find(&rs, Rse));
    let mut detail = describe(&rs);
    for n in notes {
        detail.push_str(&format!(" | {n}"));
    }
    check(ok, detail)
}

fn main() {
    let checks: [(&str, fn() -> Check); 10] = [
        ("paired-run divergence at deflation 1 within rho + 3 SE", paired_divergence_at_full_threshold),
        ("tuned regret ordering on both benchmark models", tuned_ordering),
        ("zero-noise commit and elimination phases", commit_phase_oracle),
        ("subgaussian tail bound Monte Carlo", tail_bound_monte_carlo),
        ("G-optimal design certificate g <= 2d", design_certificate),
        ("RSE with (rho, 0) reproduces REC", specialization_identity),
        ("UCB1 paired divergence near a tie", ucb1_nonreplicable),
        ("regret identity on random traces", regret_identity),
        ("simulate byte-identical across worker counts", end_to_end_determinism),
        ("RLSE below RSE on unit-circle arms", linear_dimension_benefit),
    ];
    let mut failed = 0;
    for (i, (name, f)) in checks.iter().enumerate() {
        let start = Instant::now();
        let c = f();
        failed += !c.pass as usize;
        println!(
            "{} {:>2} {name}: {} [{:.1}s]",
            if c.pass { "PASS" } else { "FAIL" },
            i + 1,
            c.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
