use num_complex::Complex64;
use rand::Rng;

use super::config::SignalConfig;
use super::lfdma::{add_cp, LfdmaModulator};
use super::pulse::{rrc_taps, shape_symbols};
use super::symbols::map_symbols;
use crate::seed::rng_from_seed;
use crate::{ComplexStream, Error, Result};

/// Reusable end-to-end SC-FDMA transmitter: symbol mapping, DFT spreading,
/// CP insertion and RRC shaping of the continuous symbol stream.
pub struct FrameGenerator {
    config: SignalConfig,
    modulator: LfdmaModulator,
    taps: Vec<f64>,
}

impl FrameGenerator {
    pub fn new(config: &SignalConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config: config.clone(),
            modulator: LfdmaModulator::new(config),
            taps: rrc_taps(config.rolloff, config.rho, config.rrc_span),
        })
    }

    pub fn config(&self) -> &SignalConfig {
        &self.config
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    /// `count` CP-extended blocks (one symbol-period sample each). Block `i`
    /// carries the CP length of slot position `i`.
    pub fn cp_blocks<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Result<Vec<Vec<Complex64>>> {
        map_symbols(rng, count, &self.config)?
            .iter()
            .enumerate()
            .map(|(i, block)| add_cp(&self.modulator.modulate(block)?, self.config.cp_len(i)))
            .collect()
    }

    /// Number of output samples for an observation of `duration_s`.
    pub fn samples_for(&self, duration_s: f64) -> usize {
        (duration_s * self.config.sample_rate_hz()).round() as usize
    }

    pub fn generate(&self, duration_s: f64, seed: u64) -> Result<ComplexStream> {
        let min = self.config.block_period_s(0);
        if !(duration_s.is_finite() && duration_s >= min * (1.0 - 1e-9)) {
            return Err(Error::invalid(format!(
                "duration {duration_s} s is shorter than one block period ({min} s)"
            )));
        }
        let wanted = self.samples_for(duration_s);
        // Extra blocks past the end keep the trailing pulse tails intact.
        let guard = self.taps.len();
        let mut count = 0;
        let mut covered = 0;
        while covered < wanted + guard {
            covered += self.config.block_samples(count);
            count += 1;
        }
        let blocks = self.cp_blocks(&mut rng_from_seed(seed), count)?;
        let symbols: Vec<Complex64> = blocks.into_iter().flatten().collect();
        let mut samples = shape_symbols(&symbols, &self.taps, self.config.rho);
        samples.truncate(wanted);
        ComplexStream::new(samples, self.config.sample_rate_hz())
    }
}

/// Generates `duration_s` seconds of SC-FDMA signal. Sample 0 is the instant
/// of the first symbol of the first block (the RRC group delay is removed).
pub fn generate_frame(config: &SignalConfig, duration_s: f64, seed: u64) -> Result<ComplexStream> {
    FrameGenerator::new(config)?.generate(duration_s, seed)
}
