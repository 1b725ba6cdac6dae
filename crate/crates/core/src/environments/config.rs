//! Instance files.
//!
//! ```text
//! # Model 2
//! means    = 0.9, 0.8, 0.3
//! noise    = gaussian        # or bernoulli
//! variance = 0.5             # or: sigma = 0.7071
//! range    = 0, 1            # optional
//! ```
//!
//! A linear instance replaces `means` with `features` (rows separated by
//! `;`) and `theta`. If `means` is also given it must agree with
//! `features * theta` to within 1e-12.

use std::path::Path;

use nalgebra::{DMatrix, DVector};

use super::instance::{BanditInstance, Noise};
use crate::error::{Error, Result};
use crate::kv::KeyValues;

const KEYS: &[&str] = &["means", "noise", "sigma", "variance", "range", "features", "theta"];

fn cfg(msg: impl Into<String>) -> Error {
    Error::Config {
        line: 0,
        msg: msg.into(),
    }
}

pub fn parse_instance(text: &str) -> Result<BanditInstance> {
    let kv = KeyValues::parse(text)?;
    kv.reject_unknown(KEYS)?;

    let noise_name = kv.get("noise").unwrap_or("gaussian").to_ascii_lowercase();
    let noise = match noise_name.as_str() {
        "gaussian" | "normal" => {
            let sigma = match (kv.f64("sigma")?, kv.f64("variance")?) {
                (Some(_), Some(_)) => return Err(cfg("give either `sigma` or `variance`, not both")),
                (Some(s), None) => s,
                (None, Some(v)) if v >= 0.0 => v.sqrt(),
                (None, Some(v)) => return Err(cfg(format!("variance must be >= 0, got {v}"))),
                (None, None) => return Err(cfg("gaussian noise needs `sigma` or `variance`")),
            };
            Noise::Gaussian { sigma }
        }
        "bernoulli" => Noise::Bernoulli,
        other => return Err(cfg(format!("unknown noise family `{other}`"))),
    };

    let means = kv.f64_list("means")?;
    let inst = match (kv.matrix("features")?, kv.f64_list("theta")?) {
        (Some(rows), Some(theta)) => {
            let d = rows.first().map_or(0, Vec::len);
            if d == 0 || rows.iter().any(|r| r.len() != d) {
                return Err(cfg("feature rows must be non-empty and of equal length"));
            }
            let flat: Vec<f64> = rows.iter().flatten().copied().collect();
            let x = DMatrix::from_row_slice(rows.len(), d, &flat);
            let inst = BanditInstance::linear(x, DVector::from_vec(theta), noise)?;
            if let Some(m) = &means {
                let ok = m.len() == inst.num_arms()
                    && m.iter().zip(inst.means()).all(|(a, b)| (a - b).abs() <= 1e-12);
                if !ok {
                    return Err(cfg("`means` disagree with `features * theta`"));
                }
            }
            inst
        }
        (None, None) => {
            let m = means.ok_or_else(|| cfg("missing `means`"))?;
            match noise {
                Noise::Bernoulli => BanditInstance::bernoulli(m)?,
                Noise::Gaussian { sigma } => BanditInstance::gaussian(m, sigma)?,
            }
        }
        _ => return Err(cfg("`features` and `theta` must be given together")),
    };

    match kv.f64_list("range")? {
        Some(r) if r.len() == 2 => inst.with_mean_range(r[0], r[1]),
        Some(_) => Err(cfg("`range` needs exactly two numbers")),
        None => Ok(inst),
    }
}

pub fn load_instance(path: &Path) -> Result<BanditInstance> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_instance(&text)
}
