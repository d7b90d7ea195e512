use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{ComplexStream, Error, Result};

/// Taps of the windowed-sinc fractional delay interpolator.
pub const FRACTIONAL_DELAY_TAPS: usize = 33;

/// Blackman-windowed sinc taps delaying by `frac ∈ [0, 1)` samples, unit DC
/// gain. Tap `i` multiplies `x[u - (i - 16)]`.
pub fn fractional_delay_taps(frac: f64) -> Vec<f64> {
    let half = (FRACTIONAL_DELAY_TAPS / 2) as f64;
    let width = FRACTIONAL_DELAY_TAPS as f64 + 1.0;
    let raw: Vec<f64> = (0..FRACTIONAL_DELAY_TAPS)
        .map(|i| {
            let t = i as f64 - half - frac;
            let sinc = if t.abs() < 1e-12 { 1.0 } else { (PI * t).sin() / (PI * t) };
            let w = 0.42 + 0.5 * (2.0 * PI * t / width).cos() + 0.08 * (4.0 * PI * t / width).cos();
            sinc * w
        })
        .collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|h| h / sum).collect()
}

/// `y[u] = x(u - delay)` with zeros outside the record.
pub fn delay_samples(x: &[Complex64], delay: f64) -> Vec<Complex64> {
    let whole = delay.floor();
    let frac = delay - whole;
    let shift = whole as i64;
    let len = x.len() as i64;
    if frac < 1e-12 {
        return (0..len)
            .map(|u| {
                let v = u - shift;
                if (0..len).contains(&v) {
                    x[v as usize]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
    }
    let taps = fractional_delay_taps(frac);
    let half = (FRACTIONAL_DELAY_TAPS / 2) as i64;
    (0..len)
        .map(|u| {
            taps.iter()
                .enumerate()
                .filter_map(|(i, h)| {
                    let v = u - shift - (i as i64 - half);
                    (0..len).contains(&v).then(|| x[v as usize] * *h)
                })
                .sum()
        })
        .collect()
}

/// Frequency offset `cfo_hz`, phase rotation `phase` (radians) and a timing
/// delay of `timing_frac` symbol periods of `samples_per_symbol` samples.
pub fn apply_impairments(
    r: &ComplexStream,
    cfo_hz: f64,
    phase: f64,
    timing_frac: f64,
    samples_per_symbol: usize,
) -> Result<ComplexStream> {
    let fs = r.sample_rate_hz();
    if !(cfo_hz.abs() < fs / 2.0) {
        return Err(Error::invalid(format!(
            "carrier offset {cfo_hz} Hz exceeds the Nyquist limit {} Hz",
            fs / 2.0
        )));
    }
    if !(0.0..1.0).contains(&timing_frac) {
        return Err(Error::invalid(format!("timing offset {timing_frac} must lie in [0, 1)")));
    }
    if !phase.is_finite() {
        return Err(Error::invalid("phase offset must be finite"));
    }
    let step = cfo_hz / fs;
    let rotated: Vec<Complex64> = r
        .samples()
        .iter()
        .enumerate()
        .map(|(u, s)| s * Complex64::from_polar(1.0, 2.0 * PI * (step * u as f64).fract() + phase))
        .collect();
    let delay = timing_frac * samples_per_symbol as f64;
    let out = if delay == 0.0 { rotated } else { delay_samples(&rotated, delay) };
    Ok(r.with_samples(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(len: usize) -> ComplexStream {
        ComplexStream::new(
            (0..len).map(|i| Complex64::new((i as f64 * 0.1).sin(), (i as f64 * 0.07).cos())).collect(),
            7.68e6,
        )
        .unwrap()
    }

    #[test]
    fn zero_offsets_are_identity() {
        let r = ramp(100);
        assert_eq!(apply_impairments(&r, 0.0, 0.0, 0.0, 4).unwrap(), r);
    }

    #[test]
    fn pi_phase_negates() {
        let r = ramp(64);
        let y = apply_impairments(&r, 0.0, PI, 0.0, 4).unwrap();
        for (a, b) in r.samples().iter().zip(y.samples()) {
            assert!((a + b).norm() < 1e-12);
        }
    }

    #[test]
    fn cfo_phase_increment() {
        let r = ComplexStream::new(vec![Complex64::new(1.0, 0.0); 32], 7.68e6).unwrap();
        let y = apply_impairments(&r, 500e3, 0.0, 0.0, 4).unwrap();
        let want = 2.0 * PI * 500.0 / 7680.0;
        for w in y.samples().windows(2) {
            let d = (w[1] * w[0].conj()).arg();
            assert!((d - want).abs() < 1e-12);
        }
        assert!(apply_impairments(&r, 4e6, 0.0, 0.0, 4).is_err());
    }

    #[test]
    fn integer_delay_shifts() {
        let r = ramp(20);
        // Half a symbol at 4 samples per symbol is two samples.
        let y = apply_impairments(&r, 0.0, 0.0, 0.5, 4).unwrap();
        assert_eq!(y.samples()[0], Complex64::new(0.0, 0.0));
        assert_eq!(y.samples()[5], r.samples()[3]);
    }

    #[test]
    fn fractional_delay_of_slow_tone() {
        let f = 0.01;
        let x: Vec<Complex64> = (0..400).map(|u| Complex64::from_polar(1.0, 2.0 * PI * f * u as f64)).collect();
        let y = delay_samples(&x, 2.3);
        for u in 50..350 {
            let want = Complex64::from_polar(1.0, 2.0 * PI * f * (u as f64 - 2.3));
            assert!((y[u] - want).norm() < 1e-3, "u = {u}");
        }
        let taps = fractional_delay_taps(0.3);
        assert!((taps.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }
}
