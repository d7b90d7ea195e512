use std::io::Write;

use crate::caf_estimation::estimate_caf;
use crate::caf_theory::{CafQuery, CafTheory};
use crate::waveform::{generate_frame, SignalConfig};
use crate::{Error, Result};

/// Which CAF coordinate is scanned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileMode {
    /// Vary the delay (samples) at a fixed normalized cycle frequency.
    DelayScanAtCf,
    /// Vary the normalized cycle frequency at a fixed delay.
    CfScanAtDelay,
}

impl std::str::FromStr for ProfileMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "delay" | "delay_scan_at_cf" => Ok(ProfileMode::DelayScanAtCf),
            "cf" | "cf_scan_at_delay" => Ok(ProfileMode::CfScanAtDelay),
            _ => Err(Error::config(format!("unknown profile mode '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRow {
    /// Scanned coordinate: delay in samples or normalized cycle frequency.
    pub query: f64,
    pub estimate: f64,
    pub theory: f64,
}

/// `|ĉ|` and `|c|` along one CAF slice of a noise-free record.
pub fn caf_profile(
    config: &SignalConfig,
    mode: ProfileMode,
    fixed: f64,
    points: &[f64],
    observation_s: f64,
    seed: u64,
) -> Result<Vec<ProfileRow>> {
    let r = generate_frame(config, observation_s, seed)?;
    let theory = CafTheory::new(config)?;
    points
        .iter()
        .map(|&p| {
            let q = match mode {
                ProfileMode::DelayScanAtCf => CafQuery::new(fixed, p)?,
                ProfileMode::CfScanAtDelay => CafQuery::new(p, fixed)?,
            };
            Ok(ProfileRow {
                query: p,
                estimate: estimate_caf(&r, &q)?.value.norm(),
                theory: theory.evaluate(&q).value.norm(),
            })
        })
        .collect()
}

/// Columns: `query, estimate_magnitude, theory_magnitude`.
pub fn write_profile_csv<W: Write>(out: W, rows: &[ProfileRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["query", "estimate_magnitude", "theory_magnitude"])?;
    for r in rows {
        w.write_record([r.query.to_string(), r.estimate.to_string(), r.theory.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
