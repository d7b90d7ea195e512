use std::time::Instant;

use rayon::prelude::*;

use crate::channel::{apply_chain, ChainSeeds, Scenario};
use crate::config_file::RunConfig;
use crate::detector::{detect, TestResult};
use crate::waveform::FrameGenerator;
use crate::{ComplexStream, Error, Result};

/// Received record of trial `trial` (after the full channel).
pub fn trial_record(cfg: &RunConfig, trial: u64, master_seed: u64) -> Result<ComplexStream> {
    cfg.validate()?;
    let seeds = ChainSeeds::for_trial(master_seed, trial);
    let signal = FrameGenerator::new(&cfg.signal)?.generate(cfg.scenario.observation_s, seeds.waveform)?;
    apply_chain(&signal, &cfg.scenario, &cfg.signal, &seeds)
}

/// One generate → channel → detect pass.
pub fn run_trial(cfg: &RunConfig, trial: u64, master_seed: u64) -> Result<TestResult> {
    detect(&trial_record(cfg, trial, master_seed)?, &cfg.signal, &cfg.detector_settings())
}

/// Wilson score interval at 95 % confidence.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054;
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloResult {
    /// Fraction of trials deciding H1. Under an H0 scenario this is the
    /// empirical false-alarm rate.
    pub pd: f64,
    pub detections: usize,
    pub trials: usize,
    pub ci95: (f64, f64),
    pub scenario: Scenario,
    pub master_seed: u64,
    pub elapsed_s: f64,
}

/// Runs `trials` independent trials in parallel on the current rayon pool.
pub fn estimate_pd(cfg: &RunConfig, trials: usize, master_seed: u64) -> Result<MonteCarloResult> {
    if trials == 0 {
        return Err(Error::config("trials must be at least 1"));
    }
    cfg.validate()?;
    let start = Instant::now();
    let decisions: Vec<bool> = (0..trials as u64)
        .into_par_iter()
        .map(|t| run_trial(cfg, t, master_seed).map(|r| r.decision.is_present()))
        .collect::<Result<_>>()?;
    let detections = decisions.iter().filter(|d| **d).count();
    Ok(MonteCarloResult {
        pd: detections as f64 / trials as f64,
        detections,
        trials,
        ci95: wilson_interval(detections, trials),
        scenario: cfg.scenario.clone(),
        master_seed,
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_reference_values() {
        // Hand-evaluated score interval for 8/10 at z = 1.96.
        let (lo, hi) = wilson_interval(8, 10);
        assert!((lo - 0.490_162).abs() < 1e-5, "{lo}");
        assert!((hi - 0.943_318).abs() < 1e-5, "{hi}");
        let (lo, hi) = wilson_interval(0, 50);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.1);
    }

    #[test]
    fn trials_replay() {
        let mut cfg = RunConfig::default();
        cfg.scenario.observation_s = 2e-3;
        let a = run_trial(&cfg, 7, 99).unwrap();
        let b = run_trial(&cfg, 7, 99).unwrap();
        assert_eq!(a, b);
        assert!(estimate_pd(&cfg, 0, 1).is_err());
    }
}
