//! Report files.
//!
//! `summary.txt` is a `key = value` document; `curves.csv` has the header
//! `t,algorithm,mean_regret,half_width`; `replication.csv` has the header
//! `algorithm,kind,phase_or_round,slot,count`. None of them records the
//! worker count, so outputs are byte-identical across pool sizes.

use std::io::Write;

use crate::replication::{Divergence, ReplicationReport};

use super::runner::ExperimentReport;
use super::tune::{TuneOutcome, TuneReport};

fn io(e: std::io::Error) -> crate::Error {
    e.into()
}

pub fn write_spec_header(w: &mut dyn Write, report: &ExperimentReport) -> crate::Result<()> {
    let s = &report.spec;
    let names: Vec<&str> = s.algorithms.iter().map(|a| a.name()).collect();
    writeln!(w, "model = {}", s.model_name).map_err(io)?;
    writeln!(w, "arms = {}", s.instance.num_arms()).map_err(io)?;
    writeln!(w, "horizon = {}", s.horizon).map_err(io)?;
    writeln!(w, "runs = {}", s.runs).map_err(io)?;
    writeln!(w, "seed = {}", s.seed).map_err(io)?;
    writeln!(w, "rho = {}", s.rho).map_err(io)?;
    writeln!(w, "a = {}", s.a).map_err(io)?;
    writeln!(w, "sigma = {}", s.sigma).map_err(io)?;
    writeln!(w, "algorithms = {}", names.join(",")).map_err(io)?;
    Ok(())
}

pub fn write_summary(w: &mut dyn Write, report: &ExperimentReport) -> crate::Result<()> {
    writeln!(w, "# regret experiment summary").map_err(io)?;
    write_spec_header(w, report)?;
    for r in &report.results {
        let n = r.algorithm.name();
        writeln!(w, "{n}.deflation = {}", r.deflation).map_err(io)?;
        writeln!(w, "{n}.final_regret_mean = {:.4}", r.mean_final_regret).map_err(io)?;
        writeln!(w, "{n}.final_regret_half_width = {:.4}", r.half_width).map_err(io)?;
        writeln!(w, "{n}.final_regret_sd = {:.4}", r.sd_final_regret).map_err(io)?;
        writeln!(w, "{n}.rho_hat = {:.6}", r.rho_hat).map_err(io)?;
        writeln!(w, "{n}.wrong_commits = {}", r.wrong_commits).map_err(io)?;
        writeln!(w, "{n}.violations = {}", r.violations.len()).map_err(io)?;
    }
    Ok(())
}

pub fn write_curves(w: &mut dyn Write, report: &ExperimentReport) -> crate::Result<()> {
    writeln!(w, "t,algorithm,mean_regret,half_width").map_err(io)?;
    for r in &report.results {
        let n = r.algorithm.name();
        for p in &r.curve {
            writeln!(w, "{},{n},{:.6},{:.6}", p.t, p.mean_regret, p.half_width).map_err(io)?;
        }
    }
    Ok(())
}

pub fn write_tuning(w: &mut dyn Write, tunes: &[TuneReport]) -> crate::Result<()> {
    for t in tunes {
        let n = t.algorithm.name();
        writeln!(w, "{n}.target_rho = {}", t.target_rho).map_err(io)?;
        for (d, rho) in &t.evaluated {
            writeln!(w, "{n}.grid.{d} = {rho:.6}").map_err(io)?;
        }
        match t.outcome {
            TuneOutcome::Found { deflation, rho_hat } => {
                writeln!(w, "{n}.tuned = found").map_err(io)?;
                writeln!(w, "{n}.tuned_deflation = {deflation}").map_err(io)?;
                writeln!(w, "{n}.tuned_rho_hat = {rho_hat:.6}").map_err(io)?;
            }
            TuneOutcome::NotFound {
                best_rho_hat,
                best_deflation,
            } => {
                writeln!(w, "{n}.tuned = not_found").map_err(io)?;
                writeln!(w, "{n}.best_deflation = {best_deflation}").map_err(io)?;
                writeln!(w, "{n}.best_rho_hat = {best_rho_hat:.6}").map_err(io)?;
            }
        }
    }
    Ok(())
}

/// Key-value lines for one replication report, keys prefixed by `prefix`.
pub fn write_replication_summary(w: &mut dyn Write, prefix: &str, r: &ReplicationReport) -> crate::Result<()> {
    writeln!(w, "{prefix}.pairs = {}", r.n_pairs).map_err(io)?;
    writeln!(w, "{prefix}.divergent = {}", r.divergent).map_err(io)?;
    writeln!(w, "{prefix}.divergence_rate = {:.6}", r.divergence_rate).map_err(io)?;
    writeln!(w, "{prefix}.interval_low = {:.6}", r.interval.0).map_err(io)?;
    writeln!(w, "{prefix}.interval_high = {:.6}", r.interval.1).map_err(io)?;
    writeln!(w, "{prefix}.contract_violations = {}", r.contract_violations).map_err(io)?;
    if let Some(b) = r.bootstrap_rho {
        writeln!(w, "{prefix}.bootstrap_rho = {b:.6}").map_err(io)?;
    }
    Ok(())
}

pub fn write_attribution_header(w: &mut dyn Write) -> crate::Result<()> {
    writeln!(w, "algorithm,kind,phase_or_round,slot,count").map_err(io)
}

pub fn write_attribution_rows(w: &mut dyn Write, algorithm: &str, r: &ReplicationReport) -> crate::Result<()> {
    for (d, count) in &r.attribution {
        match d {
            Divergence::Decision { phase, slot } => writeln!(w, "{algorithm},decision,{phase},{slot},{count}"),
            Divergence::Round(t) => writeln!(w, "{algorithm},round,{t},,{count}"),
        }
        .map_err(io)?;
    }
    Ok(())
}
