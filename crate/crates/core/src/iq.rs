//! Interleaved little-endian `f32` I/Q files with a `key = value` sidecar
//! (`<file>.meta`) carrying the sample rate.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::{ComplexStream, Error, Result};

pub fn meta_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

/// Writes `r` to `path` and its metadata to `path.meta`.
pub fn write_iq(path: impl AsRef<Path>, r: &ComplexStream) -> Result<()> {
    let path = path.as_ref();
    let mut w = BufWriter::new(fs::File::create(path)?);
    for s in r.samples() {
        w.write_all(&(s.re as f32).to_le_bytes())?;
        w.write_all(&(s.im as f32).to_le_bytes())?;
    }
    w.flush()?;
    fs::write(
        meta_path(path),
        format!("format = cf32_le\nsample_rate_hz = {}\nsamples = {}\n", r.sample_rate_hz(), r.len()),
    )?;
    Ok(())
}

/// Reads a file written by [`write_iq`].
pub fn read_iq(path: impl AsRef<Path>) -> Result<ComplexStream> {
    let path = path.as_ref();
    let meta = fs::read_to_string(meta_path(path))?;
    let mut rate = None;
    for line in meta.lines() {
        if let Some((k, v)) = line.split_once('=') {
            match k.trim() {
                "sample_rate_hz" => rate = v.trim().parse::<f64>().ok(),
                "format" if v.trim() != "cf32_le" => {
                    return Err(Error::config(format!("unsupported sample format '{}'", v.trim())))
                }
                _ => {}
            }
        }
    }
    let rate = rate.ok_or_else(|| Error::config("metadata lacks sample_rate_hz"))?;
    let bytes = fs::read(path)?;
    if bytes.len() % 8 != 0 {
        return Err(Error::invalid(format!("{} bytes is not a whole number of I/Q pairs", bytes.len())));
    }
    let samples = bytes
        .chunks_exact(8)
        .map(|c| {
            let re = f32::from_le_bytes([c[0], c[1], c[2], c[3]]);
            let im = f32::from_le_bytes([c[4], c[5], c[6], c[7]]);
            Complex64::new(re as f64, im as f64)
        })
        .collect();
    ComplexStream::new(samples, rate)
}
