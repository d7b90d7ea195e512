use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::config::SignalConfig;
use super::symbols::SymbolBlock;
use crate::{Error, Result};

/// Planned transforms for the DFT-spread path: N-point forward DFT
/// (unnormalized), localized mapping onto subcarriers `0..N`, M-point inverse
/// DFT scaled by `1/M`.
///
/// With this scaling the samples at `m = Q n` are exactly `x_n / Q` whenever
/// `Q = M / N` is an integer.
pub struct LfdmaModulator {
    n: usize,
    m: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl LfdmaModulator {
    pub fn new(config: &SignalConfig) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n: config.n,
            m: config.m,
            forward: planner.plan_fft_forward(config.n),
            inverse: planner.plan_fft_inverse(config.m),
        }
    }

    pub fn modulate(&self, block: &SymbolBlock) -> Result<Vec<Complex64>> {
        if block.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: block.len(),
            });
        }
        let mut freq = block.symbols().to_vec();
        self.forward.process(&mut freq);
        let mut grid = vec![Complex64::new(0.0, 0.0); self.m];
        grid[..self.n].copy_from_slice(&freq);
        self.inverse.process(&mut grid);
        let scale = 1.0 / self.m as f64;
        grid.iter_mut().for_each(|s| *s *= scale);
        Ok(grid)
    }
}

/// Time-domain LFDMA samples of one block via the transform pipeline.
pub fn lfdma_block_dft(block: &SymbolBlock, config: &SignalConfig) -> Result<Vec<Complex64>> {
    LfdmaModulator::new(config).modulate(block)
}

/// Direct evaluation of the LFDMA closed form for integer `Q = M / N`.
///
/// With `m = Q n + q`, samples with `q = 0` are `x_n / Q`; the others are
/// `(1 - e^{j2πq/Q}) / (QN) · Σ_p x_p / (1 - e^{j2π((n-p)/N + q/(QN))})`.
pub fn lfdma_block_closed_form(block: &SymbolBlock, config: &SignalConfig) -> Result<Vec<Complex64>> {
    let n_len = config.n;
    if block.len() != n_len {
        return Err(Error::DimensionMismatch {
            expected: n_len,
            actual: block.len(),
        });
    }
    let q_factor = config.integer_q().filter(|&q| q >= 1).ok_or_else(|| {
        Error::invalid(format!(
            "closed form needs an integer expansion factor, got M/N = {}",
            config.q()
        ))
    })?;
    let x = block.symbols();
    let qn = (q_factor * n_len) as f64;
    let mut out = vec![Complex64::new(0.0, 0.0); config.m];
    for n in 0..n_len {
        out[q_factor * n] = x[n] / q_factor as f64;
        for q in 1..q_factor {
            let lead = (Complex64::new(1.0, 0.0)
                - Complex64::from_polar(1.0, 2.0 * PI * q as f64 / q_factor as f64))
                / qn;
            let sum: Complex64 = x
                .iter()
                .enumerate()
                .map(|(p, &xp)| {
                    let theta = (n as f64 - p as f64) / n_len as f64 + q as f64 / qn;
                    xp / (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, 2.0 * PI * theta))
                })
                .sum();
            out[q_factor * n + q] = lead * sum;
        }
    }
    Ok(out)
}

/// Prepends the last `l` samples of `body` to it.
pub fn add_cp(body: &[Complex64], l: usize) -> Result<Vec<Complex64>> {
    let m = body.len();
    if l == 0 || l >= m {
        return Err(Error::invalid(format!(
            "cyclic prefix length must satisfy 0 < L < M = {m}, got {l}"
        )));
    }
    let mut out = Vec::with_capacity(m + l);
    out.extend_from_slice(&body[m - l..]);
    out.extend_from_slice(body);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;
    use crate::waveform::symbols::map_symbols;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cfg(n: usize, m: usize) -> SignalConfig {
        SignalConfig {
            n,
            m,
            ..SignalConfig::default()
        }
    }

    #[test]
    fn even_positions_are_scaled_copies_for_q2() {
        let config = cfg(64, 128);
        let block = map_symbols(&mut rng_from_seed(5), 1, &config).unwrap().remove(0);
        let out = lfdma_block_dft(&block, &config).unwrap();
        for (n, x) in block.symbols().iter().enumerate() {
            assert!((out[2 * n] - x / 2.0).norm() < 1e-12);
        }
    }

    #[test]
    fn single_symbol_two_subcarriers() {
        let config = cfg(1, 2);
        let x0 = c(0.3, -0.7);
        let block = SymbolBlock::new(vec![x0]);
        for out in [
            lfdma_block_dft(&block, &config).unwrap(),
            lfdma_block_closed_form(&block, &config).unwrap(),
        ] {
            assert!((out[0] - x0 / 2.0).norm() < 1e-15);
            assert!((out[1] - x0 / 2.0).norm() < 1e-15);
        }
    }

    #[test]
    fn zero_block_maps_to_zero() {
        let config = cfg(8, 16);
        let out = lfdma_block_dft(&SymbolBlock::new(vec![c(0.0, 0.0); 8]), &config).unwrap();
        assert!(out.iter().all(|s| s.norm() == 0.0));
    }

    #[test]
    fn closed_form_single_nonzero_symbol() {
        let (n_len, q_factor) = (8usize, 2usize);
        let config = cfg(n_len, n_len * q_factor);
        let p = 3;
        let mut syms = vec![c(0.0, 0.0); n_len];
        syms[p] = c(1.0, 0.0);
        let out = lfdma_block_closed_form(&SymbolBlock::new(syms), &config).unwrap();
        let qn = (q_factor * n_len) as f64;
        for n in 0..n_len {
            for q in 1..q_factor {
                let lead = (c(1.0, 0.0) - Complex64::from_polar(1.0, 2.0 * PI * q as f64 / q_factor as f64)) / qn;
                let theta = (n as f64 - p as f64) / n_len as f64 + q as f64 / qn;
                let want = lead / (c(1.0, 0.0) - Complex64::from_polar(1.0, 2.0 * PI * theta));
                assert!((out[q_factor * n + q] - want).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn closed_form_matches_dft_for_q3() {
        let config = cfg(12, 36);
        let block = map_symbols(&mut rng_from_seed(9), 1, &config).unwrap().remove(0);
        let a = lfdma_block_dft(&block, &config).unwrap();
        let b = lfdma_block_closed_form(&block, &config).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn closed_form_rejects_fractional_q() {
        let config = SignalConfig::default();
        let block = SymbolBlock::new(vec![c(1.0, 0.0); 72]);
        assert!(lfdma_block_closed_form(&block, &config).is_err());
    }

    #[test]
    fn dimension_mismatch() {
        let config = cfg(8, 16);
        let err = lfdma_block_dft(&SymbolBlock::new(vec![c(1.0, 0.0); 7]), &config);
        assert!(matches!(err, Err(Error::DimensionMismatch { expected: 8, actual: 7 })));
    }

    #[test]
    fn cp_examples() {
        let (a, b, cc) = (c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0));
        assert_eq!(add_cp(&[a, b, cc], 1).unwrap(), vec![cc, a, b, cc]);
        let body: Vec<Complex64> = (0..16).map(|i| c(i as f64, -(i as f64))).collect();
        let out = add_cp(&body, 4).unwrap();
        assert_eq!(out.len(), 20);
        assert_eq!(&out[..4], &out[16..]);
        assert!(add_cp(&body, 0).is_err());
        assert!(add_cp(&body, 16).is_err());
    }
}
