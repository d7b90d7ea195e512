use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{ComplexStream, Error, Result};

/// Order of the receive low-pass filter.
pub const RECEIVE_FILTER_ORDER: usize = 13;

/// One second-order (or first-order, `a2 = b2 = 0`) section,
/// `H(z) = (b0 + b1 z⁻¹ + b2 z⁻²) / (1 + a1 z⁻¹ + a2 z⁻²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Biquad {
    pub b: [f64; 3],
    pub a: [f64; 2],
}

impl Biquad {
    pub fn response(&self, f_norm: f64) -> Complex64 {
        let z1 = Complex64::from_polar(1.0, -2.0 * PI * f_norm);
        let z2 = z1 * z1;
        (self.b[0] + z1 * self.b[1] + z2 * self.b[2]) / (1.0 + z1 * self.a[0] + z2 * self.a[1])
    }
}

/// Digital Butterworth low-pass as a cascade of sections (bilinear transform
/// with pre-warped cutoff). Each section has unit DC gain.
#[derive(Debug, Clone, PartialEq)]
pub struct Butterworth {
    sections: Vec<Biquad>,
}

impl Butterworth {
    pub fn lowpass(order: usize, cutoff_hz: f64, sample_rate_hz: f64) -> Result<Self> {
        if order == 0 {
            return Err(Error::invalid("filter order must be >= 1"));
        }
        if !(cutoff_hz > 0.0 && cutoff_hz < sample_rate_hz / 2.0) {
            return Err(Error::invalid(format!(
                "cutoff {cutoff_hz} Hz must lie in (0, {} Hz)",
                sample_rate_hz / 2.0
            )));
        }
        let fs2 = 2.0 * sample_rate_hz;
        let warped = fs2 * (PI * cutoff_hz / sample_rate_hz).tan();
        let bilinear = |s: Complex64| (fs2 + s) / (fs2 - s);
        let mut sections = Vec::with_capacity(order.div_ceil(2));
        for k in 0..order / 2 {
            let theta = PI * (2 * k + order + 1) as f64 / (2 * order) as f64;
            let z = bilinear(Complex64::from_polar(warped, theta));
            let (a1, a2) = (-2.0 * z.re, z.norm_sqr());
            let g = (1.0 + a1 + a2) / 4.0;
            sections.push(Biquad { b: [g, 2.0 * g, g], a: [a1, a2] });
        }
        if order % 2 == 1 {
            let z = bilinear(Complex64::new(-warped, 0.0)).re;
            let g = (1.0 - z) / 2.0;
            sections.push(Biquad { b: [g, g, 0.0], a: [-z, 0.0] });
        }
        Ok(Self { sections })
    }

    pub fn sections(&self) -> &[Biquad] {
        &self.sections
    }

    /// Complex frequency response at `f_norm` cycles per sample.
    pub fn response(&self, f_norm: f64) -> Complex64 {
        self.sections.iter().map(|s| s.response(f_norm)).product()
    }

    /// Causal filtering from rest (transposed direct form II per section).
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = x.to_vec();
        for s in &self.sections {
            let (mut w1, mut w2) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            for v in y.iter_mut() {
                let input = *v;
                let out = input * s.b[0] + w1;
                w1 = input * s.b[1] - out * s.a[0] + w2;
                w2 = input * s.b[2] - out * s.a[1];
                *v = out;
            }
        }
        y
    }
}

/// Order-`order` Butterworth low-pass applied to I and Q.
pub fn receive_filter(r: &ComplexStream, order: usize, cutoff_hz: f64) -> Result<ComplexStream> {
    let filter = Butterworth::lowpass(order, cutoff_hz, r.sample_rate_hz())?;
    Ok(r.with_samples(filter.apply(r.samples())))
}
