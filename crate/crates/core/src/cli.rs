//! The `repbandit` command line.
//!
//! Exit codes: 0 on success, 1 on invalid input, 2 when `--check` finds a
//! property violation. Every random quantity is derived from `--seed`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nalgebra::DMatrix;

use crate::algorithms::AlgorithmChoice;
use crate::design::{approx_g_optimal, g_value};
use crate::environments::load_instance;
use crate::error::{invalid, Error, Result};
use crate::experiments::{
    grouped_rho_hat, model_name_of, output, parse_algorithms, run_experiment, tune_deflation, z_replicable_test,
    ExperimentSpec, TuneOutcome,
};
use crate::kv::KeyValues;
use crate::parallel::{with_workers, WORKERS_ENV};
use crate::replication::{run_pairs, shared_randomness_fingerprints, summarize};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "repbandit",
    version,
    about = "Replicable multi-armed bandits: simulate, certify replicability, tune, design",
    disable_help_subcommand = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Regret experiment: writes summary.txt and curves.csv
    Simulate(SimulateArgs),
    /// Paired-run replicability estimate: writes summary.txt and replication.csv
    Replicate(ReplicateArgs),
    /// Grid-search deflations to a target rho_hat, then simulate at them
    Tune(TuneArgs),
    /// Approximate G-optimal design for a feature matrix
    Design(DesignArgs),
    /// Replicable two-sample z-test
    Ztest(ZtestArgs),
}

#[derive(Debug, Args, Clone)]
pub struct ExperimentArgs {
    /// Instance file (key = value)
    #[arg(long, value_name = "FILE")]
    pub model: Option<PathBuf>,
    /// Experiment file; explicit flags override its values
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Comma-separated algorithms: rec, rse, rasmab, rlse, ucb1
    #[arg(long = "algos", value_name = "LIST")]
    pub algos: Option<String>,
    /// Horizon T
    #[arg(long = "T", value_name = "N")]
    pub horizon: Option<u64>,
    /// Independent runs per algorithm
    #[arg(long, value_name = "N")]
    pub runs: Option<u64>,
    /// Master seed
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    /// Nonreplication budget rho in (0, 0.5]
    #[arg(long, value_name = "R")]
    pub rho: Option<f64>,
    /// Phase growth base a >= 2
    #[arg(long, value_name = "A")]
    pub a: Option<f64>,
    /// Subgaussian radius for the schedules (default: from the noise)
    #[arg(long, value_name = "S")]
    pub sigma: Option<f64>,
    /// Threshold multipliers, e.g. rec=0.03,rse=0.015
    #[arg(long, value_name = "LIST")]
    pub deflation: Option<String>,
    /// Blocks of runs that share one draw of internal randomness
    #[arg(long = "u-groups", value_name = "N")]
    pub u_groups: Option<u64>,
    /// Worker threads
    #[arg(long, value_name = "N", env = WORKERS_ENV)]
    pub workers: Option<usize>,
    /// Output directory
    #[arg(long = "out-dir", value_name = "DIR", default_value = "out")]
    pub out_dir: PathBuf,
    /// Exit with status 2 if any checked property fails
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub exp: ExperimentArgs,
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    #[command(flatten)]
    pub exp: ExperimentArgs,
    /// Largest acceptable rho_hat, in (0, 1]
    #[arg(long = "target-rho", value_name = "R")]
    pub target_rho: Option<f64>,
    /// Deflation grid, comma-separated
    #[arg(long, value_name = "LIST")]
    pub grid: Option<String>,
}

#[derive(Debug, Args)]
pub struct ReplicateArgs {
    #[command(flatten)]
    pub exp: ExperimentArgs,
    /// Number of paired runs
    #[arg(long, value_name = "N", default_value_t = 1000)]
    pub pairs: u64,
    /// Single runs under one shared randomness for the bootstrap estimate (0 skips it)
    #[arg(long = "bootstrap-runs", value_name = "N")]
    pub bootstrap_runs: Option<u64>,
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    /// CSV file, one row of features per arm
    #[arg(long, value_name = "FILE")]
    pub features: PathBuf,
    /// Comma-separated active arms (1-based); default all
    #[arg(long, value_name = "LIST")]
    pub active: Option<String>,
    /// Exit with status 2 unless g <= 2 d'
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct ZtestArgs {
    /// Sample count of the first group
    pub n1: u64,
    /// Sample count of the second group
    pub n2: u64,
    /// Empirical mean of the first group
    #[arg(allow_negative_numbers = true)]
    pub m1: f64,
    /// Empirical mean of the second group
    #[arg(allow_negative_numbers = true)]
    pub m2: f64,
    /// Level p in (0, 1)
    #[arg(default_value_t = 0.05)]
    pub p: f64,
}

/// Entry point used by the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    dispatch(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the exit code.
pub fn dispatch<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_INVALID
                }
                _ => {
                    let msg = e.render().to_string();
                    let first = msg.lines().next().unwrap_or("invalid arguments");
                    let _ = writeln!(err, "{first}");
                    EXIT_INVALID
                }
            };
        }
    };
    match run(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

fn run(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Simulate(a) => simulate(a, out),
        Command::Replicate(a) => replicate(a, out),
        Command::Tune(a) => tune(a, out),
        Command::Design(a) => design(a, out),
        Command::Ztest(a) => ztest(a, out),
    }
}

fn parse_deflations(list: &str) -> Result<Vec<(AlgorithmChoice, f64)>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let (name, val) = item
                .split_once('=')
                .ok_or_else(|| invalid(format!("deflation entry `{item}` is not `algorithm=value`")))?;
            let alg: AlgorithmChoice = name.parse()?;
            let d: f64 = val
                .trim()
                .parse()
                .map_err(|_| invalid(format!("deflation `{val}` is not a number")))?;
            Ok((alg, d))
        })
        .collect()
}

fn parse_grid(list: &str) -> Result<Vec<f64>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|v| v.parse::<f64>().map_err(|_| invalid(format!("grid value `{v}` is not a number"))))
        .collect()
}

/// Builds and validates the experiment before any simulation starts.
fn build_spec(a: &ExperimentArgs) -> Result<ExperimentSpec> {
    let mut spec = match (&a.config, &a.model) {
        (Some(cfg), model) => {
            let kv = KeyValues::load(cfg)?;
            let base = cfg.parent().unwrap_or(Path::new("."));
            match model {
                Some(m) => {
                    let mut s = ExperimentSpec::new(model_name_of(m), load_instance(m)?);
                    let rest = strip_model(&kv)?;
                    s.apply(&rest)?;
                    s
                }
                None => ExperimentSpec::from_key_values(&kv, base)?,
            }
        }
        (None, Some(m)) => ExperimentSpec::new(model_name_of(m), load_instance(m)?),
        (None, None) => return Err(invalid("give --model or --config")),
    };
    if let Some(list) = &a.algos {
        spec.algorithms = parse_algorithms(list)?;
    }
    if let Some(t) = a.horizon {
        spec.horizon = t;
    }
    if let Some(r) = a.runs {
        spec.runs = r as usize;
    }
    if let Some(s) = a.seed {
        spec.seed = s;
    }
    if let Some(r) = a.rho {
        spec.rho = r;
    }
    if let Some(x) = a.a {
        spec.a = x;
    }
    if let Some(s) = a.sigma {
        spec.sigma = s;
    }
    if let Some(g) = a.u_groups {
        spec.u_groups = g as usize;
    }
    if let Some(list) = &a.deflation {
        for (alg, d) in parse_deflations(list)? {
            spec.deflation.insert(alg, d);
        }
    }
    spec.validate()?;
    if a.workers == Some(0) {
        return Err(invalid("--workers must be >= 1"));
    }
    Ok(spec)
}

fn strip_model(kv: &KeyValues) -> Result<KeyValues> {
    let mut text = String::new();
    for k in kv.keys().filter(|k| *k != "model") {
        text.push_str(&format!("{k} = {}\n", kv.get(k).unwrap_or("")));
    }
    KeyValues::parse(&text)
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn simulate(a: SimulateArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = build_spec(&a.exp)?;
    let report = with_workers(a.exp.workers.unwrap_or(0), || run_experiment(&spec))??;
    let mut summary = Vec::new();
    output::write_summary(&mut summary, &report)?;
    let mut curves = Vec::new();
    output::write_curves(&mut curves, &report)?;
    write_file(&a.exp.out_dir, "summary.txt", &summary)?;
    write_file(&a.exp.out_dir, "curves.csv", &curves)?;

    for r in &report.results {
        writeln!(
            out,
            "{:<7} final regret {:>10.2} +- {:<8.2} rho_hat {:.3}",
            r.algorithm.name(),
            r.mean_final_regret,
            r.half_width,
            r.rho_hat
        )?;
    }
    writeln!(out, "wrote {}", a.exp.out_dir.display())?;
    if a.exp.check && report.violation_count() > 0 {
        for r in &report.results {
            for v in &r.violations {
                writeln!(out, "violation: {} {v}", r.algorithm.name())?;
            }
        }
        return Ok(EXIT_CHECK_FAILED);
    }
    Ok(EXIT_OK)
}

fn replicate(a: ReplicateArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = build_spec(&a.exp)?;
    if a.pairs < 1 {
        return Err(invalid("--pairs must be >= 1"));
    }
    let pairs = a.pairs as usize;
    let boot = a.bootstrap_runs.unwrap_or(a.pairs) as usize;

    let mut summary = Vec::new();
    writeln!(summary, "# paired-run replicability report")?;
    writeln!(summary, "model = {}", spec.model_name)?;
    writeln!(summary, "horizon = {}", spec.horizon)?;
    writeln!(summary, "seed = {}", spec.seed)?;
    writeln!(summary, "rho = {}", spec.rho)?;
    writeln!(summary, "pairs = {pairs}")?;
    writeln!(summary, "bootstrap_runs = {boot}")?;
    writeln!(summary, "u_groups = {}", spec.u_groups)?;
    let mut csv = Vec::new();
    output::write_attribution_header(&mut csv)?;

    let mut failed = false;
    for &alg in &spec.algorithms {
        let cfg = spec.config_for(alg)?;
        let inst = spec.instance.clone();
        let (pairs_out, prints) = with_workers(a.exp.workers.unwrap_or(0), || {
            let p = run_pairs(&cfg, &inst, spec.seed, pairs)?;
            let f = if boot > 0 {
                Some(shared_randomness_fingerprints(&cfg, &inst, spec.seed, boot, spec.u_groups.min(boot))?)
            } else {
                None
            };
            Ok::<_, Error>((p, f))
        })??;
        let mut report = summarize(&pairs_out)?;
        if let Some(f) = prints {
            report = report.with_bootstrap(grouped_rho_hat(&f, spec.u_groups.min(boot)));
        }
        writeln!(summary, "{}.deflation = {}", alg.name(), cfg.rep.deflation)?;
        output::write_replication_summary(&mut summary, alg.name(), &report)?;
        output::write_attribution_rows(&mut csv, alg.name(), &report)?;

        let bound = spec.rho + 3.0 * report.binomial_se(spec.rho);
        let rate_checked = alg != AlgorithmChoice::Ucb1 && cfg.rep.deflation >= 1.0;
        let bad = report.contract_violations > 0 || (rate_checked && report.divergence_rate > bound);
        failed |= bad;
        writeln!(
            out,
            "{:<7} divergence {:.4} [{:.4}, {:.4}] over {} pairs{}",
            alg.name(),
            report.divergence_rate,
            report.interval.0,
            report.interval.1,
            report.n_pairs,
            report
                .bootstrap_rho
                .map(|b| format!(", bootstrap rho_hat {b:.4}"))
                .unwrap_or_default()
        )?;
    }
    write_file(&a.exp.out_dir, "summary.txt", &summary)?;
    write_file(&a.exp.out_dir, "replication.csv", &csv)?;
    writeln!(out, "wrote {}", a.exp.out_dir.display())?;
    Ok(if a.exp.check && failed { EXIT_CHECK_FAILED } else { EXIT_OK })
}

fn tune(a: TuneArgs, out: &mut dyn Write) -> Result<i32> {
    let mut spec = build_spec(&a.exp)?;
    if let Some(t) = a.target_rho {
        spec.target_rho = t;
    }
    if let Some(g) = &a.grid {
        spec.grid = parse_grid(g)?;
    }
    spec.validate()?;

    let workers = a.exp.workers.unwrap_or(0);
    let mut tunes = Vec::new();
    let mut all_found = true;
    for &alg in spec.algorithms.iter().filter(|&&x| x != AlgorithmChoice::Ucb1) {
        let t = with_workers(workers, || tune_deflation(&spec, alg))??;
        let chosen = match t.outcome {
            TuneOutcome::Found { deflation, rho_hat } => {
                writeln!(out, "{:<7} deflation {deflation} (rho_hat {rho_hat:.3})", alg.name())?;
                deflation
            }
            TuneOutcome::NotFound {
                best_rho_hat,
                best_deflation,
            } => {
                all_found = false;
                writeln!(
                    out,
                    "{:<7} no grid point reaches {}; best rho_hat {best_rho_hat:.3} at {best_deflation}",
                    alg.name(),
                    spec.target_rho
                )?;
                best_deflation
            }
        };
        spec.deflation.insert(alg, chosen);
        tunes.push(t);
    }

    let report = with_workers(workers, || run_experiment(&spec))??;
    let mut summary = Vec::new();
    output::write_summary(&mut summary, &report)?;
    output::write_tuning(&mut summary, &tunes)?;
    let mut curves = Vec::new();
    output::write_curves(&mut curves, &report)?;
    write_file(&a.exp.out_dir, "summary.txt", &summary)?;
    write_file(&a.exp.out_dir, "curves.csv", &curves)?;
    for r in &report.results {
        writeln!(
            out,
            "{:<7} final regret {:>10.2} +- {:<8.2} rho_hat {:.3}",
            r.algorithm.name(),
            r.mean_final_regret,
            r.half_width,
            r.rho_hat
        )?;
    }
    writeln!(out, "wrote {}", a.exp.out_dir.display())?;
    let failed = !all_found || report.violation_count() > 0;
    Ok(if a.exp.check && failed { EXIT_CHECK_FAILED } else { EXIT_OK })
}

/// Reads a numeric CSV; a first line that does not parse is taken as a
/// header. `#` lines and blank lines are skipped.
pub fn read_feature_csv(path: &Path) -> Result<DMatrix<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = line.split(',').map(|c| c.trim().parse::<f64>()).collect();
        match parsed {
            Ok(r) => rows.push(r),
            Err(_) if rows.is_empty() && idx == 0 => continue,
            Err(_) => {
                return Err(Error::Config {
                    line: idx + 1,
                    msg: format!("non-numeric feature row `{line}`"),
                })
            }
        }
    }
    let d = rows.first().map_or(0, Vec::len);
    if d == 0 || rows.iter().any(|r| r.len() != d) {
        return Err(invalid("feature rows must be non-empty and of equal length"));
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    Ok(DMatrix::from_row_slice(rows.len(), d, &flat))
}

fn design(a: DesignArgs, out: &mut dyn Write) -> Result<i32> {
    let x = read_feature_csv(&a.features)?;
    let k = x.nrows();
    let active: Vec<usize> = match &a.active {
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| match s.parse::<usize>() {
                Ok(i) if (1..=k).contains(&i) => Ok(i - 1),
                _ => Err(invalid(format!("active arm `{s}` is not in 1..={k}"))),
            })
            .collect::<Result<_>>()?,
        None => (0..k).collect(),
    };
    let w = approx_g_optimal(&x, &active)?;
    let certified = g_value(&w, &x, &active)?;
    let bound = 2.0 * w.dim as f64;
    writeln!(out, "arms = {k}")?;
    writeln!(out, "dim = {}", x.ncols())?;
    writeln!(out, "span_dim = {}", w.dim)?;
    writeln!(out, "g_value = {certified:.9}")?;
    writeln!(out, "g_bound = {bound}")?;
    let support: Vec<String> = w.support.iter().map(|i| (i + 1).to_string()).collect();
    writeln!(out, "support = {}", support.join(","))?;
    for (arm, weight) in w.arms.iter().zip(&w.weights) {
        writeln!(out, "weight.{} = {weight:.9}", arm + 1)?;
    }
    Ok(if a.check && certified > bound { EXIT_CHECK_FAILED } else { EXIT_OK })
}

fn ztest(a: ZtestArgs, out: &mut dyn Write) -> Result<i32> {
    let t = z_replicable_test(a.n1, a.n2, a.m1, a.m2, a.p)?;
    writeln!(out, "z = {:.6}", t.z)?;
    writeln!(out, "threshold = {:.6}", t.threshold)?;
    writeln!(out, "decision = {}", if t.reject { "reject" } else { "accept" })?;
    Ok(EXIT_OK)
}
