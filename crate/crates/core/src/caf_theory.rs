//! Closed-form cyclic autocorrelation of SC-FDMA signals.
//!
//! The time-varying autocorrelation of the shaped LFDMA stream is piecewise in
//! the delay. Writing `τ = μT + sgn(μ)τ_s` with `0 ≤ τ_s < T` and
//! `f = τ_s / T`, each delay falls in one of seven families (see
//! [`LagCase`]). Families near zero delay repeat every symbol period `T`
//! and carry cycle frequencies `k/T`; families around the CP lag `±MT` repeat
//! once per block and carry cycle frequencies `b/((M+L)T)`.
//!
//! Everything here is expressed in sample units: `β̃ = β T / ρ` in cycles per
//! sample and `τ̃ = ρ τ / T` in samples. The pulse-energy integrals are Riemann
//! sums over the same unit-energy RRC taps the generator uses, so the returned
//! values are directly comparable with estimates from generated streams.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::waveform::{rrc_taps, SignalConfig};
use crate::{Error, Result};

const GRID_TOL: f64 = 1e-9;

/// A (cycle frequency, delay) pair in normalized units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CafQuery {
    /// Cycle frequency in cycles per sample, `|beta| <= 1/2`.
    pub beta: f64,
    /// Delay in samples.
    pub tau: f64,
}

impl CafQuery {
    pub fn new(beta: f64, tau: f64) -> Result<Self> {
        if !(beta.is_finite() && beta.abs() <= 0.5 + 1e-12) {
            return Err(Error::invalid(format!(
                "cycle frequency must satisfy |beta| <= 1/2, got {beta}"
            )));
        }
        if !tau.is_finite() {
            return Err(Error::invalid("delay must be finite"));
        }
        Ok(Self { beta, tau })
    }

    /// Integer delay, if the query sits on the sample grid.
    pub fn tau_samples(&self) -> Option<i64> {
        let r = self.tau.round();
        ((self.tau - r).abs() < 1e-9).then_some(r as i64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CafValue {
    pub value: Complex64,
    pub query: CafQuery,
}

/// Delay family of the piecewise closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LagCase {
    /// `|μ| = 0`: `((1-f)/4) c_x + f A(1)`.
    Zero,
    /// Odd `|μ|` up to `M-L-1`: `(1-f) A(μ)`.
    SymbolOdd,
    /// Even `|μ|` from 2 to `M-L`: `f A(|μ|+1)`.
    SymbolEven,
    /// `|μ| = M`, the CP lag: `((1-f)/4) c_x + f A(1)`, L-term pulse sum.
    CpPeak,
    /// Odd `|μ|` in `M-L+1 ..= M+L-1`: `(1-f) A(μ)`, L-term pulse sum.
    CpOdd,
    /// Even `|μ|` in `M-L+2 ..= M+L-2`, `|μ| != M`: `f A(|μ|+1)`, L-term
    /// pulse sum.
    CpEven,
    /// No correlation.
    Outside,
}

impl LagCase {
    /// Whether the family's cycle frequencies lie on the block-rate grid.
    pub fn on_block_grid(self) -> bool {
        matches!(self, LagCase::CpPeak | LagCase::CpOdd | LagCase::CpEven)
    }
}

/// `A(μ) = c_x / (2N) · 1 / (1 - e^{jπ|μ|/N})`.
pub fn a_coefficient(mu: i64, n: usize, c_x: f64) -> Result<Complex64> {
    if mu == 0 {
        return Err(Error::invalid("A(mu) is undefined at mu = 0"));
    }
    if n < 2 {
        return Err(Error::invalid(format!("A(mu) needs N >= 2, got {n}")));
    }
    let abs = mu.unsigned_abs();
    if abs % (2 * n as u64) == 0 {
        return Err(Error::invalid(format!(
            "A(mu) has a pole at |mu| = {abs}, a multiple of 2N"
        )));
    }
    Ok(a_unchecked(abs, n, c_x))
}

fn a_unchecked(mu_abs: u64, n: usize, c_x: f64) -> Complex64 {
    let denom = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, PI * mu_abs as f64 / n as f64);
    c_x / (2.0 * n as f64) / denom
}

/// `Σ_{p=0}^{N-1} 1 / (1 - cos(π(2n - 2p + 1)/N))`, which equals `N²/2` for
/// every `n`.
pub fn n_squared_identity_check(n_len: usize, n: usize) -> f64 {
    (0..n_len)
        .map(|p| {
            let arg = PI * (2.0 * n as f64 - 2.0 * p as f64 + 1.0) / n_len as f64;
            1.0 / (1.0 - arg.cos())
        })
        .sum()
}

/// Dimensions the closed form depends on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagModel {
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub c_x: f64,
}

impl LagModel {
    pub fn from_config(config: &SignalConfig) -> Self {
        Self {
            n: config.n,
            m: config.m,
            l: config.nominal_cp_len(),
            c_x: config.c_x(),
        }
    }

    /// Family of lag index `|μ|`.
    pub fn case_of(&self, mu_abs: usize) -> LagCase {
        let (m, l) = (self.m, self.l);
        if mu_abs == 0 {
            LagCase::Zero
        } else if mu_abs <= m - l {
            if mu_abs % 2 == 1 {
                LagCase::SymbolOdd
            } else {
                LagCase::SymbolEven
            }
        } else if mu_abs == m {
            LagCase::CpPeak
        } else if mu_abs < m + l {
            if mu_abs % 2 == 1 {
                LagCase::CpOdd
            } else {
                LagCase::CpEven
            }
        } else {
            LagCase::Outside
        }
    }

    fn a(&self, mu_abs: usize) -> Complex64 {
        if mu_abs % (2 * self.n) == 0 {
            // Only reachable for non-integer Q with even lags; the closed form
            // never evaluates A at these points for Q = 2.
            return Complex64::new(0.0, 0.0);
        }
        a_unchecked(mu_abs as u64, self.n, self.c_x)
    }

    /// Time-domain coefficient of family `|μ|` at fractional offset `f`.
    ///
    /// `f` may be 1 to evaluate the closing limit of a family. The CP-odd
    /// family at `|μ| = M - 1` interpolates towards the CP peak value
    /// `c_x / 4` so that adjacent families meet at `τ = MT`.
    pub fn coefficient(&self, mu_abs: usize, f: f64) -> (LagCase, Complex64) {
        let case = self.case_of(mu_abs);
        let quarter = Complex64::new(self.c_x / 4.0, 0.0);
        let value = match case {
            LagCase::Zero | LagCase::CpPeak => quarter * (1.0 - f) + self.a(1) * f,
            LagCase::SymbolOdd => self.a(mu_abs) * (1.0 - f),
            LagCase::CpOdd => {
                let tail = if mu_abs + 1 == self.m { quarter * f } else { Complex64::new(0.0, 0.0) };
                self.a(mu_abs) * (1.0 - f) + tail
            }
            LagCase::SymbolEven | LagCase::CpEven => self.a(mu_abs + 1) * f,
            LagCase::Outside => Complex64::new(0.0, 0.0),
        };
        (case, value)
    }

    /// Splits a delay in samples into `(|μ|, f)` for oversampling `rho`.
    pub fn split_delay(tau: f64, rho: usize) -> (usize, f64) {
        let t = tau.abs() / rho as f64;
        let mut mu = t.floor();
        let mut f = t - mu;
        if 1.0 - f < 1e-12 {
            mu += 1.0;
            f = 0.0;
        }
        (mu as usize, f)
    }
}

/// `(1/ρ) Σ_i h_i² e^{-j2πβ̃ i}` over centered unit-energy taps: the sampled
/// form of `T⁻¹ ∫ |g(t)|² e^{-j2πβt} dt`.
pub fn pulse_integral(taps: &[f64], rho: usize, beta: f64) -> Complex64 {
    let center = (taps.len() / 2) as f64;
    let sum: Complex64 = taps
        .iter()
        .enumerate()
        .map(|(i, h)| Complex64::from_polar(h * h, -2.0 * PI * beta * (i as f64 - center)))
        .sum();
    sum / rho as f64
}

/// `Σ_{u=0}^{L-1} e^{-j2πβ̃ρu}`, the CP-window pulse sum factor.
pub fn cp_window_sum(l: usize, rho: usize, beta: f64) -> Complex64 {
    (0..l)
        .map(|u| Complex64::from_polar(1.0, -2.0 * PI * beta * (rho * u) as f64))
        .sum()
}

fn on_grid(x: f64) -> bool {
    (x - x.round()).abs() < GRID_TOL
}

/// Closed-form evaluator bound to one configuration.
#[derive(Debug, Clone)]
pub struct CafTheory {
    model: LagModel,
    rho: usize,
    taps: Vec<f64>,
}

impl CafTheory {
    pub fn new(config: &SignalConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            model: LagModel::from_config(config),
            rho: config.rho,
            taps: rrc_taps(config.rolloff, config.rho, config.rrc_span),
        })
    }

    pub fn model(&self) -> &LagModel {
        &self.model
    }

    pub fn evaluate(&self, q: &CafQuery) -> CafValue {
        let zero = CafValue {
            value: Complex64::new(0.0, 0.0),
            query: *q,
        };
        let (mu_abs, f) = LagModel::split_delay(q.tau, self.rho);
        let (case, coef) = self.model.coefficient(mu_abs, f);
        let (m, l, rho) = (self.model.m, self.model.l, self.rho);
        let value = match case {
            LagCase::Outside => return zero,
            LagCase::Zero | LagCase::SymbolOdd | LagCase::SymbolEven => {
                if !on_grid(q.beta * rho as f64) {
                    return zero;
                }
                coef * pulse_integral(&self.taps, rho, q.beta)
            }
            LagCase::CpPeak | LagCase::CpOdd | LagCase::CpEven => {
                if !on_grid(q.beta * (rho * (m + l)) as f64) {
                    return zero;
                }
                coef * pulse_integral(&self.taps, rho, q.beta) * cp_window_sum(l, rho, q.beta)
                    / (m + l) as f64
            }
        };
        if coef.norm() == 0.0 {
            return zero;
        }
        CafValue { value, query: *q }
    }
}

/// Closed-form CAF of the SC-FDMA stream described by `config`.
pub fn theoretical_caf(config: &SignalConfig, q: &CafQuery) -> Result<CafValue> {
    Ok(CafTheory::new(config)?.evaluate(q))
}

/// Where the CAF is non-zero, and the two detection features.
#[derive(Debug, Clone, PartialEq)]
pub struct CafSupport {
    /// Zero cycle frequency at the CP lag `ρM`.
    pub cp_feature: CafQuery,
    /// Symbol-rate cycle frequency `1/ρ` at zero delay.
    pub symbol_rate_feature: CafQuery,
    /// Mirror of the symbol-rate feature at `-1/ρ`.
    pub symbol_rate_mirror: CafQuery,
    /// Spacing of the cycle-frequency grid for delays `|τ̃| < ρ(M-L+1)`.
    pub symbol_cf_spacing: f64,
    /// Spacing of the block-rate grid for delays around `±ρM`.
    pub block_cf_spacing: f64,
    /// Delays (samples, inclusive) carried by the symbol-rate grid.
    pub symbol_delay_span: (f64, f64),
    /// Delays (samples, positive side, half-open) carried by the block grid.
    pub block_delay_span: (f64, f64),
    /// `A(μ)` for `μ = 1 ..= M+L-1` (odd entries are the ones in use).
    pub a_coefficients: Vec<Complex64>,
}

impl CafSupport {
    /// Cycle frequencies `k/ρ` within `[-1/2, 1/2]`.
    pub fn symbol_grid(&self) -> Vec<f64> {
        grid(self.symbol_cf_spacing)
    }

    /// Cycle frequencies `b/(ρ(M+L))` within `[-1/2, 1/2]`.
    pub fn block_grid(&self) -> Vec<f64> {
        grid(self.block_cf_spacing)
    }
}

fn grid(step: f64) -> Vec<f64> {
    let k = (0.5 / step + 1e-9).floor() as i64;
    (-k..=k).map(|i| i as f64 * step).collect()
}

pub fn caf_support(config: &SignalConfig) -> Result<CafSupport> {
    config.validate()?;
    let model = LagModel::from_config(config);
    let rho = config.rho as f64;
    let (m, l) = (config.m, model.l);
    Ok(CafSupport {
        cp_feature: CafQuery { beta: 0.0, tau: rho * m as f64 },
        symbol_rate_feature: CafQuery { beta: 1.0 / rho, tau: 0.0 },
        symbol_rate_mirror: CafQuery { beta: -1.0 / rho, tau: 0.0 },
        symbol_cf_spacing: 1.0 / rho,
        block_cf_spacing: 1.0 / (rho * (m + l) as f64),
        symbol_delay_span: (0.0, rho * (m - l + 1) as f64),
        block_delay_span: (rho * (m - l + 1) as f64, rho * (m + l) as f64),
        a_coefficients: (1..m + l).map(|mu| model.a(mu)).collect(),
    })
}
