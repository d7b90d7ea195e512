use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::config_file::RunConfig;
use crate::{Error, Result};

use super::trial::{estimate_pd, MonteCarloResult};

/// Scenario field varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Snr,
    Pfa,
    Observation,
    Sir,
    Rho,
    Bits,
}

impl SweepAxis {
    /// Writes `value` into the corresponding field of `cfg`.
    pub fn apply(self, cfg: &mut RunConfig, value: f64) -> Result<()> {
        let integer = || {
            if value >= 1.0 && value.fract() == 0.0 {
                Ok(value as usize)
            } else {
                Err(Error::config(format!("{self} sweep needs positive integers, got {value}")))
            }
        };
        match self {
            SweepAxis::Snr => cfg.scenario.snr_db = value,
            SweepAxis::Pfa => cfg.scenario.p_fa = value,
            SweepAxis::Observation => cfg.scenario.observation_s = value,
            SweepAxis::Sir => cfg.scenario.sir_db = Some(value),
            SweepAxis::Rho => cfg.signal.rho = integer()?,
            SweepAxis::Bits => cfg.scenario.quantizer_bits = Some(integer()? as u32),
        }
        cfg.validate()
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "snr" | "snr_db" => Ok(SweepAxis::Snr),
            "pfa" | "p_fa" => Ok(SweepAxis::Pfa),
            "observation" | "observation_s" => Ok(SweepAxis::Observation),
            "sir" | "sir_db" => Ok(SweepAxis::Sir),
            "rho" => Ok(SweepAxis::Rho),
            "bits" | "quantizer_bits" => Ok(SweepAxis::Bits),
            _ => Err(Error::config(format!("unknown sweep axis '{s}'"))),
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepAxis::Snr => "snr",
            SweepAxis::Pfa => "pfa",
            SweepAxis::Observation => "observation",
            SweepAxis::Sir => "sir",
            SweepAxis::Rho => "rho",
            SweepAxis::Bits => "bits",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub base: RunConfig,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis_value: f64,
    pub result: MonteCarloResult,
}

/// One Monte Carlo point per axis value. Every point reuses the same master
/// seed, so neighbouring points share random numbers.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    if spec.values.is_empty() {
        return Err(Error::config("sweep needs at least one value"));
    }
    if spec.trials == 0 {
        return Err(Error::config("trials must be at least 1"));
    }
    spec.values
        .iter()
        .map(|&v| {
            let mut cfg = spec.base.clone();
            spec.axis.apply(&mut cfg, v)?;
            Ok(SweepRow { axis_value: v, result: estimate_pd(&cfg, spec.trials, spec.seed)? })
        })
        .collect()
}

/// Columns: `axis_value, pd, ci_lo, ci_hi, trials, seed`.
pub fn write_sweep_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["axis_value", "pd", "ci_lo", "ci_hi", "trials", "seed"])?;
    for r in rows {
        w.write_record([
            r.axis_value.to_string(),
            r.result.pd.to_string(),
            r.result.ci95.0.to_string(),
            r.result.ci95.1.to_string(),
            r.result.trials.to_string(),
            r.result.master_seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
