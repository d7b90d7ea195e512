use num_complex::Complex64;

use crate::{Error, Result};

/// Complex baseband samples together with their sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexStream {
    samples: Vec<Complex64>,
    sample_rate_hz: f64,
}

impl ComplexStream {
    /// Wraps `samples`, rejecting empty records, non-finite values and a
    /// non-positive sample rate.
    pub fn new(samples: Vec<Complex64>, sample_rate_hz: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("stream must contain at least one sample"));
        }
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::invalid(format!(
                "sample rate must be positive and finite, got {sample_rate_hz}"
            )));
        }
        if let Some(i) = samples.iter().position(|s| !(s.re.is_finite() && s.im.is_finite())) {
            return Err(Error::invalid(format!("non-finite sample at index {i}")));
        }
        Ok(Self {
            samples,
            sample_rate_hz,
        })
    }

    /// Builds a stream that inherits the rate of `self`, used by stages that
    /// map samples to samples. Finite-ness is the caller's responsibility.
    pub(crate) fn with_samples(&self, samples: Vec<Complex64>) -> Self {
        debug_assert!(!samples.is_empty());
        Self {
            samples,
            sample_rate_hz: self.sample_rate_hz,
        }
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Mean of |r(u)|².
    pub fn mean_power(&self) -> f64 {
        mean_power(&self.samples)
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }

    /// Multiplies every sample by `a`.
    pub fn scaled(&self, a: Complex64) -> Self {
        self.with_samples(self.samples.iter().map(|s| s * a).collect())
    }
}

pub(crate) fn mean_power(samples: &[Complex64]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    samples.iter().map(|s| s.norm_sqr()).sum::<f64>() / samples.len() as f64
}
