use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Slots hold seven SC-FDMA symbols under the normal (short) cyclic prefix.
pub const SYMBOLS_PER_SLOT: usize = 7;

/// Default RRC truncation, in symbol periods.
pub const DEFAULT_RRC_SPAN: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpMode {
    /// Extended prefix, L/M = 1/4 on every symbol.
    Long,
    /// Normal prefix, L/M = 10/128 on the first symbol of a slot and 9/128
    /// on the remaining six.
    Short,
}

impl FromStr for CpMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "long" | "extended" => Ok(CpMode::Long),
            "short" | "normal" => Ok(CpMode::Short),
            other => Err(Error::config(format!("unknown cp_mode '{other}'"))),
        }
    }
}

impl fmt::Display for CpMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CpMode::Long => "long",
            CpMode::Short => "short",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Modulation {
    Bpsk,
    Qpsk,
    Qam16,
    Qam64,
}

impl Modulation {
    /// E[|x|²] of the normalized constellation.
    pub fn second_moment(self) -> f64 {
        1.0
    }
}

impl FromStr for Modulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "bpsk" => Ok(Modulation::Bpsk),
            "qpsk" | "4qam" => Ok(Modulation::Qpsk),
            "16qam" | "qam16" => Ok(Modulation::Qam16),
            "64qam" | "qam64" => Ok(Modulation::Qam64),
            _ => Err(Error::config(format!("unsupported modulation '{s}'"))),
        }
    }
}

impl fmt::Display for Modulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Modulation::Bpsk => "bpsk",
            Modulation::Qpsk => "qpsk",
            Modulation::Qam16 => "16qam",
            Modulation::Qam64 => "64qam",
        })
    }
}

/// SC-FDMA numerology and transmit pulse parameters.
///
/// `n` data symbols per block are DFT-spread onto `n` of `m` subcarriers;
/// `rho` is the number of output samples per symbol period
/// `T = 1 / (m * delta_f_hz)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalConfig {
    pub n: usize,
    pub m: usize,
    pub rho: usize,
    pub cp_mode: CpMode,
    pub rolloff: f64,
    pub delta_f_hz: f64,
    pub modulation: Modulation,
    pub rrc_span: usize,
}

impl Default for SignalConfig {
    /// 1.4 MHz LTE uplink: N = 72, M = 128, ρ = 4, 15 kHz spacing, long CP,
    /// 16-QAM, RRC roll-off 0.35.
    fn default() -> Self {
        Self {
            n: 72,
            m: 128,
            rho: 4,
            cp_mode: CpMode::Long,
            rolloff: 0.35,
            delta_f_hz: 15e3,
            modulation: Modulation::Qam16,
            rrc_span: DEFAULT_RRC_SPAN,
        }
    }
}

impl SignalConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m <= self.n {
            return Err(Error::config(format!(
                "need M > N >= 1, got N = {}, M = {}",
                self.n, self.m
            )));
        }
        if self.rho == 0 {
            return Err(Error::config("oversampling factor rho must be >= 1"));
        }
        if !(0.0..=1.0).contains(&self.rolloff) {
            return Err(Error::config(format!(
                "rolloff must lie in [0, 1], got {}",
                self.rolloff
            )));
        }
        if !(self.delta_f_hz.is_finite() && self.delta_f_hz > 0.0) {
            return Err(Error::config("subcarrier spacing must be positive"));
        }
        if self.rrc_span == 0 || self.rrc_span % 2 != 0 {
            return Err(Error::config("rrc_span must be a positive even number of symbols"));
        }
        for idx in 0..SYMBOLS_PER_SLOT {
            let l = self.cp_len(idx);
            if l == 0 || l >= self.m {
                return Err(Error::config(format!(
                    "cyclic prefix length {l} must satisfy 0 < L < M = {}",
                    self.m
                )));
            }
        }
        Ok(())
    }

    /// Expansion factor M / N.
    pub fn q(&self) -> f64 {
        self.m as f64 / self.n as f64
    }

    /// `Some(Q)` when M is an integer multiple of N.
    pub fn integer_q(&self) -> Option<usize> {
        (self.m % self.n == 0).then_some(self.m / self.n)
    }

    pub fn c_x(&self) -> f64 {
        self.modulation.second_moment()
    }

    /// CP length in symbol periods for the `symbol_index`-th block of a frame.
    pub fn cp_len(&self, symbol_index: usize) -> usize {
        match self.cp_mode {
            CpMode::Long => self.m / 4,
            CpMode::Short => {
                let num = if symbol_index % SYMBOLS_PER_SLOT == 0 { 10 } else { 9 };
                ((num * self.m) as f64 / 128.0).round() as usize
            }
        }
    }

    /// CP length of the first block, which the closed-form CAF assumes for
    /// every block.
    pub fn nominal_cp_len(&self) -> usize {
        self.cp_len(0)
    }

    pub fn symbol_period_s(&self) -> f64 {
        1.0 / (self.m as f64 * self.delta_f_hz)
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.rho as f64 * self.m as f64 * self.delta_f_hz
    }

    /// Samples occupied by block `symbol_index` once CP-extended and shaped.
    pub fn block_samples(&self, symbol_index: usize) -> usize {
        (self.m + self.cp_len(symbol_index)) * self.rho
    }

    pub fn block_period_s(&self, symbol_index: usize) -> f64 {
        (self.m + self.cp_len(symbol_index)) as f64 * self.symbol_period_s()
    }
}
