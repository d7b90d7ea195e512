use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use super::config::SignalConfig;
use crate::{ComplexStream, Error, Result};

/// Root-raised-cosine impulse response at `t` symbol periods, unnormalized.
fn rrc_at(t: f64, rolloff: f64) -> f64 {
    let b = rolloff;
    if t.abs() < 1e-12 {
        return 1.0 - b + 4.0 * b / PI;
    }
    if b > 0.0 && (t.abs() - 1.0 / (4.0 * b)).abs() < 1e-9 {
        let arg = PI / (4.0 * b);
        return b * FRAC_1_SQRT_2 * ((1.0 + 2.0 / PI) * arg.sin() + (1.0 - 2.0 / PI) * arg.cos());
    }
    let num = (PI * t * (1.0 - b)).sin() + 4.0 * b * t * (PI * t * (1.0 + b)).cos();
    let den = PI * t * (1.0 - (4.0 * b * t).powi(2));
    num / den
}

/// Unit-energy RRC taps spanning `span` symbol periods at `rho` samples per
/// period (`span * rho + 1` taps, centered on the middle tap).
pub fn rrc_taps(rolloff: f64, rho: usize, span: usize) -> Vec<f64> {
    let half = (span * rho / 2) as i64;
    let mut taps: Vec<f64> = (-half..=half)
        .map(|i| rrc_at(i as f64 / rho as f64, rolloff))
        .collect();
    let energy = taps.iter().map(|h| h * h).sum::<f64>().sqrt();
    taps.iter_mut().for_each(|h| *h /= energy);
    taps
}

/// Places `symbols` every `rho` samples and convolves with `taps`.
///
/// The output is advanced by the filter group delay `(taps.len() - 1) / 2`,
/// so sample `k * rho` is the instant of symbol `k`. It holds
/// `symbols.len() * rho` samples; the tail of the last pulse is dropped.
pub fn shape_symbols(symbols: &[Complex64], taps: &[f64], rho: usize) -> Vec<Complex64> {
    let out_len = symbols.len() * rho;
    let delay = (taps.len() - 1) / 2;
    let mut out = vec![Complex64::new(0.0, 0.0); out_len];
    for (k, &z) in symbols.iter().enumerate() {
        let base = (k * rho) as i64 - delay as i64;
        for (i, &h) in taps.iter().enumerate() {
            let idx = base + i as i64;
            if idx >= 0 && (idx as usize) < out_len {
                out[idx as usize] += z * h;
            }
        }
    }
    out
}

/// RRC-shapes a sequence of CP-extended blocks into a stream at
/// `f_s = rho * M * delta_f`.
pub fn pulse_shape(blocks: &[Vec<Complex64>], config: &SignalConfig) -> Result<ComplexStream> {
    let symbols: Vec<Complex64> = blocks.iter().flatten().copied().collect();
    if symbols.is_empty() {
        return Err(Error::invalid("pulse shaping needs at least one symbol"));
    }
    let taps = rrc_taps(config.rolloff, config.rho, config.rrc_span);
    ComplexStream::new(
        shape_symbols(&symbols, &taps, config.rho),
        config.sample_rate_hz(),
    )
}
