//! Propagation and receiver impairments.
//!
//! The chain order is fixed: fading → interference → carrier/phase/timing
//! offsets → receive filter → noise → quantization. See [`apply_chain`].

mod fading;
mod filter;
mod impairments;
mod noise;
mod profile;
mod quantize;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

pub use fading::{apply_fading, JakesProcess, OSCILLATORS};
pub use filter::{receive_filter, Biquad, Butterworth, RECEIVE_FILTER_ORDER};
pub use impairments::{apply_impairments, delay_samples, fractional_delay_taps, FRACTIONAL_DELAY_TAPS};
pub use noise::{add_awgn, add_interference, complex_gaussian};
pub use profile::{ChannelKind, ChannelProfile, Tap, PEDESTRIAN_DOPPLER_HZ, VEHICULAR_DOPPLER_HZ};
pub use quantize::{quantize, quantize_with_clip};

use crate::seed::{derive_seed, rng_from_seed};
use crate::waveform::SignalConfig;
use crate::{ComplexStream, Error, Result};

/// Default receive filter cutoff: half the 1.4 MHz channel widened by the
/// default carrier offset, so the offset signal stays in the passband.
pub const DEFAULT_RECEIVE_CUTOFF_HZ: f64 = 1.2e6;
pub const DEFAULT_CFO_HZ: f64 = 500e3;

/// One simulated propagation/receiver setting.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub profile: ChannelProfile,
    /// Signal-to-noise ratio at the receive filter output; `+inf` disables noise.
    pub snr_db: f64,
    /// Signal-to-interference ratio at the receive filter output; `None`
    /// means no interference.
    pub sir_db: Option<f64>,
    pub cfo_hz: f64,
    /// Fixed phase offset in `[-π, π)`; `None` draws one uniformly per trial.
    pub phase_offset: Option<f64>,
    /// Fixed timing offset as a fraction of T in `[0, 1)`; `None` draws one
    /// uniformly per trial.
    pub timing_offset: Option<f64>,
    pub observation_s: f64,
    /// ADC resolution; `None` leaves samples unquantized.
    pub quantizer_bits: Option<u32>,
    pub overloading_factor: f64,
    pub p_fa: f64,
    pub receive_cutoff_hz: f64,
    /// Centre of the receive passband relative to baseband zero; `None`
    /// centres it on the occupied subcarriers.
    pub receive_center_hz: Option<f64>,
    /// `false` runs the chain without the signal (H0).
    pub signal_present: bool,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            profile: ChannelProfile::pedestrian_a(),
            snr_db: -10.0,
            sir_db: None,
            cfo_hz: DEFAULT_CFO_HZ,
            phase_offset: None,
            timing_offset: None,
            observation_s: 12.8e-3,
            quantizer_bits: Some(16),
            overloading_factor: 4.0,
            p_fa: 0.01,
            receive_cutoff_hz: DEFAULT_RECEIVE_CUTOFF_HZ,
            receive_center_hz: None,
            signal_present: true,
        }
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.profile.validate()?;
        if self.snr_db.is_nan() || self.snr_db == f64::NEG_INFINITY {
            return Err(Error::config("snr_db must be a number or +inf"));
        }
        if let Some(s) = self.sir_db {
            if s.is_nan() || s == f64::NEG_INFINITY {
                return Err(Error::config("sir_db must be a number or +inf"));
            }
        }
        if !self.cfo_hz.is_finite() {
            return Err(Error::config("cfo_hz must be finite"));
        }
        if let Some(p) = self.phase_offset {
            if !(-PI..PI).contains(&p) {
                return Err(Error::config("phase_offset must lie in [-pi, pi)"));
            }
        }
        if let Some(t) = self.timing_offset {
            if !(0.0..1.0).contains(&t) {
                return Err(Error::config("timing_offset must lie in [0, 1)"));
            }
        }
        if !(self.observation_s > 0.0 && self.observation_s.is_finite()) {
            return Err(Error::config("observation_s must be positive"));
        }
        if let Some(b) = self.quantizer_bits {
            if !(2..=52).contains(&b) {
                return Err(Error::config("quantizer_bits must lie in 2..=52"));
            }
        }
        if !(self.overloading_factor > 0.0 && self.overloading_factor.is_finite()) {
            return Err(Error::config("overloading_factor must be positive"));
        }
        if !(self.p_fa > 0.0 && self.p_fa < 1.0) {
            return Err(Error::config("p_fa must lie in (0, 1)"));
        }
        if !(self.receive_cutoff_hz > 0.0 && self.receive_cutoff_hz.is_finite()) {
            return Err(Error::config("receive_cutoff_hz must be positive"));
        }
        Ok(())
    }

    /// Passband centre used for `config`.
    pub fn receive_center(&self, config: &SignalConfig) -> f64 {
        self.receive_center_hz
            .unwrap_or(config.n as f64 * config.delta_f_hz / 2.0)
    }
}

/// Offsets actually applied in one trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOffsets {
    pub phase: f64,
    pub timing: f64,
}

impl TrialOffsets {
    /// Fixed offsets from the scenario, missing ones drawn from `seed`.
    pub fn resolve(scenario: &Scenario, seed: u64) -> Self {
        let mut rng = rng_from_seed(seed);
        let phase = rng.random_range(-PI..PI);
        let timing = rng.random_range(0.0..1.0);
        Self {
            phase: scenario.phase_offset.unwrap_or(phase),
            timing: scenario.timing_offset.unwrap_or(timing),
        }
    }
}

/// Stage seeds of one trial, split from a master seed by stage name and
/// trial index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainSeeds {
    pub waveform: u64,
    pub fading: u64,
    pub interference: u64,
    pub offsets: u64,
    pub noise: u64,
}

impl ChainSeeds {
    pub fn for_trial(master: u64, trial: u64) -> Self {
        Self {
            waveform: derive_seed(master, "waveform", trial),
            fading: derive_seed(master, "fading", trial),
            interference: derive_seed(master, "interference", trial),
            offsets: derive_seed(master, "offsets", trial),
            noise: derive_seed(master, "noise", trial),
        }
    }
}

fn shift(x: &mut [Complex64], f_norm: f64) {
    for (u, s) in x.iter_mut().enumerate() {
        *s *= Complex64::from_polar(1.0, 2.0 * PI * (f_norm * u as f64).fract());
    }
}

/// Receive filter centred on `center_hz`: a low-pass prototype applied after
/// shifting the passband to zero, then shifted back.
pub fn receive_bandpass(r: &ComplexStream, order: usize, cutoff_hz: f64, center_hz: f64) -> Result<ComplexStream> {
    let fs = r.sample_rate_hz();
    let filter = Butterworth::lowpass(order, cutoff_hz, fs)?;
    let mut x = r.samples().to_vec();
    shift(&mut x, -center_hz / fs);
    let mut y = filter.apply(&x);
    shift(&mut y, center_hz / fs);
    Ok(r.with_samples(y))
}

fn front_end(
    x: &ComplexStream,
    scenario: &Scenario,
    config: &SignalConfig,
    offsets: TrialOffsets,
) -> Result<ComplexStream> {
    let y = apply_impairments(x, scenario.cfo_hz, offsets.phase, offsets.timing, config.rho)?;
    receive_bandpass(&y, RECEIVE_FILTER_ORDER, scenario.receive_cutoff_hz, scenario.receive_center(config))
}

/// Runs `signal` through the full channel for one trial.
///
/// The signal and interference paths are propagated separately through the
/// linear stages and summed before noise, so the SNR and SIR reference is the
/// filtered noise-free signal power even when the signal is absent.
pub fn apply_chain(
    signal: &ComplexStream,
    scenario: &Scenario,
    config: &SignalConfig,
    seeds: &ChainSeeds,
) -> Result<ComplexStream> {
    scenario.validate()?;
    let offsets = TrialOffsets::resolve(scenario, seeds.offsets);
    let faded = apply_fading(signal, &scenario.profile, seeds.fading)?;
    let sig = front_end(&faded, scenario, config, offsets)?;
    let reference = sig.mean_power();

    let mut rx: Vec<Complex64> = if scenario.signal_present {
        sig.into_samples()
    } else {
        vec![Complex64::new(0.0, 0.0); signal.len()]
    };

    if let Some(sir) = scenario.sir_db.filter(|s| s.is_finite()) {
        let interference = complex_gaussian(&mut rng_from_seed(seeds.interference), signal.len(), 1.0);
        let path = front_end(&faded.with_samples(interference), scenario, config, offsets)?;
        // Like the SNR, the SIR is referenced at the receive filter output.
        let gain = (reference / 10f64.powf(sir / 10.0) / path.mean_power()).sqrt();
        rx.iter_mut().zip(path.samples()).for_each(|(a, b)| *a += b * gain);
    }

    let rx = add_awgn(&signal.with_samples(rx), scenario.snr_db, reference, seeds.noise);
    match scenario.quantizer_bits {
        Some(bits) => quantize(&rx, bits, scenario.overloading_factor),
        None => Ok(rx),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waveform::generate_frame;

    fn short_config() -> (SignalConfig, ComplexStream) {
        let config = SignalConfig::default();
        let s = generate_frame(&config, 1e-3, 11).unwrap();
        (config, s)
    }

    #[test]
    fn chain_replays_bit_exactly() {
        let (config, s) = short_config();
        let sc = Scenario { sir_db: Some(0.0), ..Scenario::default() };
        let seeds = ChainSeeds::for_trial(5, 3);
        assert_eq!(apply_chain(&s, &sc, &config, &seeds).unwrap(), apply_chain(&s, &sc, &config, &seeds).unwrap());
        let other = ChainSeeds::for_trial(5, 4);
        assert_ne!(apply_chain(&s, &sc, &config, &seeds).unwrap(), apply_chain(&s, &sc, &config, &other).unwrap());
    }

    #[test]
    fn snr_is_referenced_after_the_filter() {
        let (config, s) = short_config();
        let clean = Scenario { snr_db: f64::INFINITY, quantizer_bits: None, ..Scenario::default() };
        let noisy = Scenario { snr_db: 0.0, ..clean.clone() };
        let seeds = ChainSeeds::for_trial(1, 0);
        let a = apply_chain(&s, &clean, &config, &seeds).unwrap();
        let b = apply_chain(&s, &noisy, &config, &seeds).unwrap();
        let noise = b.samples().iter().zip(a.samples()).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>() / a.len() as f64;
        assert!((noise / a.mean_power() - 1.0).abs() < 0.05);
    }

    #[test]
    fn absent_signal_leaves_noise_only() {
        let (config, s) = short_config();
        let h0 = Scenario { signal_present: false, quantizer_bits: None, snr_db: 0.0, ..Scenario::default() };
        let h1 = Scenario { signal_present: true, ..h0.clone() };
        let seeds = ChainSeeds::for_trial(2, 0);
        let y0 = apply_chain(&s, &h0, &config, &seeds).unwrap();
        let y1 = apply_chain(&s, &h1, &config, &seeds).unwrap();
        // Same noise realization, so the H0 record carries the reference power.
        assert!((y0.mean_power() / (y1.mean_power() / 2.0) - 1.0).abs() < 0.1);
    }

    #[test]
    fn validation_rejects_bad_fields() {
        assert!(Scenario { p_fa: 1.0, ..Scenario::default() }.validate().is_err());
        assert!(Scenario { timing_offset: Some(1.0), ..Scenario::default() }.validate().is_err());
        assert!(Scenario { observation_s: 0.0, ..Scenario::default() }.validate().is_err());
        assert!(Scenario::default().validate().is_ok());
    }
}
