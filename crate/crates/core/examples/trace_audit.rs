//! Writes an RSE trace to a file, reads it back, and checks that replaying
//! the logged decisions reproduces the arm sequence.

use std::io::BufReader;
use std::sync::Arc;

use replicable_bandits::algorithms::trace_io::{read_trace, write_trace};
use replicable_bandits::algorithms::{replay_arms, run_rse, AlgorithmConfig, SharedRandomness};
use replicable_bandits::environments::Dataset;
use replicable_bandits::experiments::{model2, trace_violations};
use replicable_bandits::schedule::PhaseParams;

fn main() -> replicable_bandits::Result<()> {
    let inst = Arc::new(model2());
    let params = PhaseParams::new(2.0, 0.5f64.sqrt(), 10_000, 3)?;
    let cfg = AlgorithmConfig::rse(params, 0.3)?.with_deflation(0.04);
    let ds = Dataset::streaming(inst.clone(), params.horizon, 9)?;
    let trace = run_rse(&ds, &cfg, &SharedRandomness::new(9))?;

    let path = std::env::temp_dir().join("repbandit-trace-audit.txt");
    write_trace(&mut std::fs::File::create(&path)?, &trace, &ds)?;
    let file = read_trace(&mut BufReader::new(std::fs::File::open(&path)?))?;
    std::fs::remove_file(&path)?;

    let replayed = replay_arms(&cfg, &file.decisions, None)?;
    println!("{} decisions, {} rounds", file.decisions.len(), file.arms.len());
    println!("replay matches: {}", replayed == file.arms);
    println!("trace violations: {:?}", trace_violations(&trace, &cfg, &inst)?);
    Ok(())
}
