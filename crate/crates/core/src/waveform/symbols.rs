use num_complex::Complex64;
use rand::Rng;

use super::config::{Modulation, SignalConfig};
use crate::{Error, Result};

/// One block of `N` constellation points.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolBlock {
    symbols: Vec<Complex64>,
}

impl SymbolBlock {
    pub fn new(symbols: Vec<Complex64>) -> Self {
        Self { symbols }
    }

    pub fn symbols(&self) -> &[Complex64] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// Unit-average-power constellation for `modulation`.
pub fn constellation(modulation: Modulation) -> Vec<Complex64> {
    let square = |levels: &[f64]| -> Vec<Complex64> {
        let power = 2.0 * levels.iter().map(|l| l * l).sum::<f64>() / levels.len() as f64;
        let scale = power.sqrt().recip();
        levels
            .iter()
            .flat_map(|&i| levels.iter().map(move |&q| Complex64::new(i * scale, q * scale)))
            .collect()
    };
    match modulation {
        Modulation::Bpsk => vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
        Modulation::Qpsk => square(&[-1.0, 1.0]),
        Modulation::Qam16 => square(&[-3.0, -1.0, 1.0, 3.0]),
        Modulation::Qam64 => square(&[-7.0, -5.0, -3.0, -1.0, 1.0, 3.0, 5.0, 7.0]),
    }
}

/// Draws `count` blocks of `config.n` equiprobable constellation points.
pub fn map_symbols<R: Rng + ?Sized>(
    rng: &mut R,
    count: usize,
    config: &SignalConfig,
) -> Result<Vec<SymbolBlock>> {
    if count == 0 {
        return Err(Error::invalid("block count must be >= 1"));
    }
    let points = constellation(config.modulation);
    Ok((0..count)
        .map(|_| {
            SymbolBlock::new(
                (0..config.n)
                    .map(|_| points[rng.random_range(0..points.len())])
                    .collect(),
            )
        })
        .collect())
}
