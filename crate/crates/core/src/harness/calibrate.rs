use rayon::prelude::*;

use crate::config_file::RunConfig;
use crate::{Error, Result};

use super::trial::{run_trial, wilson_interval};

/// `P{X ≤ x}` for a chi-square variable with four degrees of freedom.
pub fn chi_square4_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        1.0 - (-x / 2.0).exp() * (1.0 + x / 2.0)
    }
}

/// One-sample Kolmogorov–Smirnov distance of `samples` from `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut x = samples.to_vec();
    x.sort_by(f64::total_cmp);
    let n = x.len() as f64;
    x.iter()
        .enumerate()
        .map(|(i, &v)| {
            let f = cdf(v);
            (f - i as f64 / n).max((i as f64 + 1.0) / n - f)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic p-value of distance `d` from `n` samples, with the Stephens
/// small-sample correction.
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let term = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    pub false_alarm_rate: f64,
    pub ci95: (f64, f64),
    pub trials: usize,
    pub ks_statistic: f64,
    pub ks_p_value: f64,
    /// `Υ` of every trial, in trial order.
    pub upsilon: Vec<f64>,
}

/// Runs `cfg` with the signal removed and compares the statistic with its
/// chi-square(4) null distribution.
pub fn calibrate_pfa(cfg: &RunConfig, trials: usize, master_seed: u64) -> Result<Calibration> {
    if trials == 0 {
        return Err(Error::config("trials must be at least 1"));
    }
    let mut h0 = cfg.clone();
    h0.scenario.signal_present = false;
    h0.validate()?;
    let results = (0..trials as u64)
        .into_par_iter()
        .map(|t| run_trial(&h0, t, master_seed))
        .collect::<Result<Vec<_>>>()?;
    let alarms = results.iter().filter(|r| r.decision.is_present()).count();
    let upsilon: Vec<f64> = results.iter().map(|r| r.upsilon).collect();
    let d = ks_statistic(&upsilon, chi_square4_cdf);
    Ok(Calibration {
        false_alarm_rate: alarms as f64 / trials as f64,
        ci95: wilson_interval(alarms, trials),
        trials,
        ks_statistic: d,
        ks_p_value: ks_p_value(d, trials),
        upsilon,
    })
}
