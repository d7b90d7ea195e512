use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use super::profile::{ChannelKind, ChannelProfile};
use crate::seed::rng_from_seed;
use crate::{ComplexStream, Error, Result};

/// Oscillators per tap in the sum-of-sinusoids Rayleigh generator.
pub const OSCILLATORS: usize = 32;

/// Unit-power Rayleigh process with a Jakes Doppler spectrum: a sum of
/// `OSCILLATORS` complex sinusoids with independent uniform arrival angles
/// and phases. Its ensemble autocorrelation is `J₀(2π f_D τ)`.
#[derive(Debug, Clone)]
pub struct JakesProcess {
    phasors: Vec<Complex64>,
    steps: Vec<Complex64>,
}

impl JakesProcess {
    pub fn new<R: Rng + ?Sized>(rng: &mut R, doppler_hz: f64, sample_rate_hz: f64) -> Self {
        let amp = (OSCILLATORS as f64).sqrt().recip();
        let (phasors, steps) = (0..OSCILLATORS)
            .map(|_| {
                let angle = rng.random_range(-PI..PI);
                let phase = rng.random_range(-PI..PI);
                let w = 2.0 * PI * doppler_hz * angle.cos() / sample_rate_hz;
                (Complex64::from_polar(amp, phase), Complex64::from_polar(1.0, w))
            })
            .unzip();
        Self { phasors, steps }
    }

    /// The next `len` gains.
    pub fn take(&mut self, len: usize) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(len);
        let amp = (OSCILLATORS as f64).sqrt().recip();
        for u in 0..len {
            out.push(self.phasors.iter().sum());
            for (p, s) in self.phasors.iter_mut().zip(&self.steps) {
                *p *= s;
            }
            // Keep the recursion on the circle over long records.
            if u % 4096 == 4095 {
                self.phasors.iter_mut().for_each(|p| *p *= amp / p.norm());
            }
        }
        out
    }
}

/// Tapped-delay-line Rayleigh fading. `AwgnOnly` profiles pass the input
/// through unchanged.
pub fn apply_fading(r: &ComplexStream, profile: &ChannelProfile, seed: u64) -> Result<ComplexStream> {
    profile.validate()?;
    if profile.kind == ChannelKind::AwgnOnly {
        return Ok(r.clone());
    }
    let fs = r.sample_rate_hz();
    let taps = profile.sampled_taps(fs);
    let len = r.len();
    if let Some(&(d, _)) = taps.iter().find(|t| t.0 >= len) {
        return Err(Error::invalid(format!(
            "tap delay of {d} samples exceeds the record length {len}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let x = r.samples();
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for &(delay, power) in &taps {
        let gain = JakesProcess::new(&mut rng, profile.doppler_hz, fs).take(len);
        let amp = power.sqrt();
        for u in delay..len {
            out[u] += gain[u] * x[u - delay] * amp;
        }
    }
    Ok(r.with_samples(out))
}
