use num_complex::Complex64;

use crate::{ComplexStream, Error, Result};

fn quantize_rail(x: f64, step: f64, clip: f64) -> f64 {
    let top = clip - step / 2.0;
    (step * ((x / step).floor() + 0.5)).clamp(-top, top)
}

/// Uniform mid-rise quantizer with `2^bits` levels over `[-clip, clip]` on
/// each rail, saturating outside.
pub fn quantize_with_clip(r: &ComplexStream, bits: u32, clip: [f64; 2]) -> Result<ComplexStream> {
    if !(2..=52).contains(&bits) {
        return Err(Error::invalid(format!("quantizer needs 2..=52 bits, got {bits}")));
    }
    if clip.iter().any(|c| !(c.is_finite() && *c > 0.0)) {
        return Err(Error::invalid("clip levels must be positive"));
    }
    let levels = 2f64.powi(bits as i32);
    let steps = [2.0 * clip[0] / levels, 2.0 * clip[1] / levels];
    Ok(r.with_samples(
        r.samples()
            .iter()
            .map(|s| {
                Complex64::new(
                    quantize_rail(s.re, steps[0], clip[0]),
                    quantize_rail(s.im, steps[1], clip[1]),
                )
            })
            .collect(),
    ))
}

/// Quantizes with the clip level of each rail set to `overloading_factor`
/// times that rail's RMS.
pub fn quantize(r: &ComplexStream, bits: u32, overloading_factor: f64) -> Result<ComplexStream> {
    if !(overloading_factor.is_finite() && overloading_factor > 0.0) {
        return Err(Error::invalid("overloading factor must be positive"));
    }
    let n = r.len() as f64;
    let rms_i = (r.samples().iter().map(|s| s.re * s.re).sum::<f64>() / n).sqrt();
    let rms_q = (r.samples().iter().map(|s| s.im * s.im).sum::<f64>() / n).sqrt();
    let fallback = rms_i.max(rms_q).max(f64::MIN_POSITIVE);
    let clip = [
        overloading_factor * if rms_i > 0.0 { rms_i } else { fallback },
        overloading_factor * if rms_q > 0.0 { rms_q } else { fallback },
    ];
    quantize_with_clip(r, bits, clip)
}
