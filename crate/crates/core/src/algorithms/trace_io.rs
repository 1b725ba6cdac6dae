//! Line-oriented text form of a run, for audit tools.
//!
//! ```text
//! # replicable-bandits trace v1
//! algorithm rse
//! arms 3
//! horizon 10000
//! dataset_seed 17
//! rounds
//! 1 1 0.8813735870195430      <- round, arm (1-based), reward
//! ...
//! decisions
//! 1 0 0                       <- phase, slot, fired (0/1) [, kept arm (1-based)]
//! 1 3 1
//! commit 1 4                  <- arm (1-based), phase; omitted if none
//! counts 9210 512 278
//! end
//! ```
//!
//! Rewards are written in shortest round-trip form, so reading a file back
//! yields bit-identical values.

use std::io::{BufRead, Write};

use super::config::AlgorithmKind;
use super::trace::{DecisionRecord, RunTrace};
use crate::environments::Dataset;
use crate::error::{invalid, Error, Result};

pub const HEADER: &str = "# replicable-bandits trace v1";

fn kind_name(k: AlgorithmKind) -> &'static str {
    match k {
        AlgorithmKind::Rec => "rec",
        AlgorithmKind::Rse => "rse",
        AlgorithmKind::Rlse => "rlse",
        AlgorithmKind::Ucb1 => "ucb1",
    }
}

fn parse_kind(s: &str) -> Option<AlgorithmKind> {
    Some(match s {
        "rec" => AlgorithmKind::Rec,
        "rse" => AlgorithmKind::Rse,
        "rlse" => AlgorithmKind::Rlse,
        "ucb1" => AlgorithmKind::Ucb1,
        _ => return None,
    })
}

/// Writes `trace`, looking rewards up in the dataset that produced it.
pub fn write_trace(w: &mut dyn Write, trace: &RunTrace, ds: &Dataset) -> Result<()> {
    if trace.arms.len() as u64 != ds.horizon() {
        return Err(invalid("trace length differs from the dataset horizon"));
    }
    writeln!(w, "{HEADER}")?;
    writeln!(w, "algorithm {}", kind_name(trace.kind))?;
    writeln!(w, "arms {}", ds.num_arms())?;
    writeln!(w, "horizon {}", ds.horizon())?;
    writeln!(w, "dataset_seed {}", ds.seed())?;
    writeln!(w, "rounds")?;
    let mut pulls = vec![0u64; ds.num_arms()];
    for (t, &a) in trace.arms.iter().enumerate() {
        let a = a as usize;
        let r = ds.reward_at(a, pulls[a])?;
        pulls[a] += 1;
        writeln!(w, "{} {} {}", t + 1, a + 1, r)?;
    }
    writeln!(w, "decisions")?;
    for d in &trace.decisions {
        match d.kept {
            Some(k) => writeln!(w, "{} {} {} {}", d.phase, d.slot, d.fired as u8, k + 1)?,
            None => writeln!(w, "{} {} {}", d.phase, d.slot, d.fired as u8)?,
        }
    }
    if let (Some(a), Some(p)) = (trace.commit_arm, trace.commit_phase) {
        writeln!(w, "commit {} {}", a + 1, p)?;
    }
    let counts: Vec<String> = trace.pull_counts.iter().map(u64::to_string).collect();
    writeln!(w, "counts {}", counts.join(" "))?;
    writeln!(w, "end")?;
    Ok(())
}

/// Contents of a trace file, arms converted back to 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceFile {
    pub kind: AlgorithmKind,
    pub num_arms: usize,
    pub horizon: u64,
    pub dataset_seed: u64,
    pub arms: Vec<u32>,
    pub rewards: Vec<f64>,
    pub decisions: Vec<DecisionRecord>,
    pub commit: Option<(usize, usize)>,
    pub counts: Vec<u64>,
}

fn bad(line: usize, msg: impl Into<String>) -> Error {
    Error::Config {
        line,
        msg: msg.into(),
    }
}

fn num<T: std::str::FromStr>(tok: Option<&str>, line: usize) -> Result<T> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| bad(line, "missing or malformed number"))
}

pub fn read_trace(r: &mut dyn BufRead) -> Result<TraceFile> {
    let lines: Vec<String> = r.lines().collect::<std::io::Result<_>>()?;
    let mut it = lines.iter().enumerate().map(|(i, l)| (i + 1, l.trim()));

    let mut next = |expect: &str| -> Result<(usize, Vec<String>)> {
        let (n, l) = it.next().ok_or_else(|| bad(0, format!("unexpected end of file, wanted `{expect}`")))?;
        Ok((n, l.split_whitespace().map(str::to_string).collect()))
    };

    let (n, h) = next("header")?;
    if h.join(" ") != HEADER {
        return Err(bad(n, "not a trace file"));
    }
    let mut field = |name: &str| -> Result<(usize, String)> {
        let (n, toks) = next(name)?;
        match toks.as_slice() {
            [k, v] if k == name => Ok((n, v.clone())),
            _ => Err(bad(n, format!("expected `{name} <value>`"))),
        }
    };
    let (n, kind) = field("algorithm")?;
    let kind = parse_kind(&kind).ok_or_else(|| bad(n, format!("unknown algorithm `{kind}`")))?;
    let (n, k) = field("arms")?;
    let num_arms: usize = num(Some(&k), n)?;
    let (n, t) = field("horizon")?;
    let horizon: u64 = num(Some(&t), n)?;
    let (n, s) = field("dataset_seed")?;
    let dataset_seed: u64 = num(Some(&s), n)?;

    let (n, toks) = next("rounds")?;
    if toks != ["rounds"] {
        return Err(bad(n, "expected `rounds`"));
    }
    let mut arms = Vec::with_capacity(horizon as usize);
    let mut rewards = Vec::with_capacity(horizon as usize);
    for expected_t in 1..=horizon {
        let (n, toks) = next("round record")?;
        let mut ts = toks.iter().map(String::as_str);
        let t: u64 = num(ts.next(), n)?;
        let a: usize = num(ts.next(), n)?;
        let r: f64 = num(ts.next(), n)?;
        if t != expected_t || a == 0 || a > num_arms {
            return Err(bad(n, "round out of order or arm out of range"));
        }
        arms.push((a - 1) as u32);
        rewards.push(r);
    }

    let (n, toks) = next("decisions")?;
    if toks != ["decisions"] {
        return Err(bad(n, "expected `decisions`"));
    }
    let mut decisions = Vec::new();
    let mut commit = None;
    loop {
        let (n, toks) = next("end")?;
        match toks.first().map(String::as_str) {
            Some("commit") => {
                let a: usize = num(toks.get(1).map(String::as_str), n)?;
                let p: usize = num(toks.get(2).map(String::as_str), n)?;
                commit = Some((a - 1, p));
            }
            Some("counts") => {
                let counts = toks[1..]
                    .iter()
                    .map(|t| num(Some(t), n))
                    .collect::<Result<Vec<u64>>>()?;
                let (n, end) = next("end")?;
                if end != ["end"] {
                    return Err(bad(n, "expected `end`"));
                }
                return Ok(TraceFile {
                    kind,
                    num_arms,
                    horizon,
                    dataset_seed,
                    arms,
                    rewards,
                    decisions,
                    commit,
                    counts,
                });
            }
            _ => {
                let mut ts = toks.iter().map(String::as_str);
                let phase = num(ts.next(), n)?;
                let slot = num(ts.next(), n)?;
                let fired: u8 = num(ts.next(), n)?;
                let kept = ts.next().map(|t| num::<usize>(Some(t), n).map(|k| k - 1)).transpose()?;
                decisions.push(DecisionRecord {
                    phase,
                    slot,
                    fired: fired == 1,
                    kept,
                });
            }
        }
    }
}
