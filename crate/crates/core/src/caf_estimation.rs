//! Finite-record CAF estimation and the asymptotic covariance of the estimate.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::caf_theory::CafQuery;
use crate::{ComplexStream, Error, Result};

/// `ĉ_r(β̃, τ̃)` together with the record length it was computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CafEstimate {
    pub value: Complex64,
    pub query: CafQuery,
    pub u_s: usize,
}

fn checked_lag(len: usize, q: &CafQuery) -> Result<i64> {
    if len == 0 {
        return Err(Error::invalid("empty stream"));
    }
    let tau = q
        .tau_samples()
        .ok_or_else(|| Error::invalid(format!("delay {} is not an integer sample lag", q.tau)))?;
    if tau.unsigned_abs() as usize >= len {
        return Err(Error::invalid(format!(
            "|delay| = {} must be smaller than the record length {len}",
            tau.abs()
        )));
    }
    Ok(tau)
}

/// `f(u) = r(u) r*(u - τ̃)` for `u = 0 .. U_s`, with out-of-record samples
/// taken as zero.
pub fn lag_product(r: &[Complex64], tau: i64) -> Vec<Complex64> {
    let len = r.len() as i64;
    (0..len)
        .map(|u| {
            let v = u - tau;
            if (0..len).contains(&v) {
                r[u as usize] * r[v as usize].conj()
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect()
}

/// `Σ_u x(u) e^{-j2πβu}` by direct summation.
fn modulated_sum(x: &[Complex64], beta: f64) -> Complex64 {
    // The phase is reduced modulo one cycle so long records keep full
    // precision.
    x.iter()
        .enumerate()
        .map(|(u, &v)| {
            let cycles = (beta * u as f64).fract();
            v * Complex64::from_polar(1.0, -2.0 * PI * cycles)
        })
        .sum()
}

/// `F_τ̃(β̃) = Σ_u r(u) r*(u - τ̃) e^{-j2πβ̃u}`.
pub fn cyclic_periodogram_component(r: &ComplexStream, tau: f64, beta: f64) -> Result<Complex64> {
    let q = CafQuery { beta, tau };
    let lag = checked_lag(r.len(), &q)?;
    Ok(modulated_sum(&lag_product(r.samples(), lag), beta))
}

/// `ĉ_r(β̃, τ̃) = F_τ̃(β̃) / U_s`.
pub fn estimate_caf(r: &ComplexStream, q: &CafQuery) -> Result<CafEstimate> {
    let f = cyclic_periodogram_component(r, q.tau, q.beta)?;
    Ok(CafEstimate {
        value: f / r.len() as f64,
        query: *q,
        u_s: r.len(),
    })
}

/// `ĉ_r(k/U_s, τ̃)` for every `k = 0 .. U_s` through one FFT of the lag
/// product.
pub fn estimate_caf_all_cfs(r: &ComplexStream, tau: f64) -> Result<Vec<Complex64>> {
    let lag = checked_lag(r.len(), &CafQuery { beta: 0.0, tau })?;
    let mut buf = lag_product(r.samples(), lag);
    let u_s = buf.len();
    FftPlanner::new().plan_fft_forward(u_s).process(&mut buf);
    let scale = 1.0 / u_s as f64;
    buf.iter_mut().for_each(|v| *v *= scale);
    Ok(buf)
}

/// Frequency-smoothing window `W(s)` used by the covariance estimate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum SpectralWindow {
    #[default]
    Rectangular,
    Kaiser {
        beta: f64,
    },
}

impl SpectralWindow {
    /// Weights for `s = -(len-1)/2 ..= (len-1)/2`, scaled so they sum to `len`.
    pub fn weights(&self, len: usize) -> Vec<f64> {
        let raw: Vec<f64> = match *self {
            SpectralWindow::Rectangular => vec![1.0; len],
            SpectralWindow::Kaiser { beta } => {
                let half = (len - 1) as f64 / 2.0;
                let norm = bessel_i0(beta);
                (0..len)
                    .map(|i| {
                        let x = if half > 0.0 { (i as f64 - half) / half } else { 0.0 };
                        bessel_i0(beta * (1.0 - x * x).max(0.0).sqrt()) / norm
                    })
                    .collect()
            }
        };
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w * len as f64 / total).collect()
    }
}

impl FromStr for SpectralWindow {
    type Err = Error;

    /// `rectangular` or `kaiser` / `kaiser:<beta>` (beta defaults to 8.6).
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let (name, arg) = match lower.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (lower.as_str(), None),
        };
        match (name, arg) {
            ("rectangular" | "rect", None) => Ok(SpectralWindow::Rectangular),
            ("kaiser", None) => Ok(SpectralWindow::Kaiser { beta: 8.6 }),
            ("kaiser", Some(a)) => a
                .parse::<f64>()
                .ok()
                .filter(|b| b.is_finite() && *b >= 0.0)
                .map(|beta| SpectralWindow::Kaiser { beta })
                .ok_or_else(|| Error::config(format!("bad kaiser parameter '{a}'"))),
            _ => Err(Error::config(format!("unknown spectral window '{s}'"))),
        }
    }
}

impl fmt::Display for SpectralWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralWindow::Rectangular => f.write_str("rectangular"),
            SpectralWindow::Kaiser { beta } => write!(f, "kaiser:{beta}"),
        }
    }
}

/// Modified Bessel function of the first kind, order zero (power series).
fn bessel_i0(x: f64) -> f64 {
    let y = x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= y / (k * k) as f64;
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}

/// Nearest odd integer to `0.006 U_s`, at least 3.
pub fn default_window_len(u_s: usize) -> usize {
    let target = 0.006 * u_s as f64;
    let odd = 2.0 * ((target - 1.0) / 2.0).round() + 1.0;
    (odd.max(3.0)) as usize
}

/// `F_τ̃(β̃ + s/U_s)` for `s = -h ..= h` by direct summation (reference path).
pub fn shifted_components_direct(lag: &[Complex64], beta: f64, half: usize) -> Vec<Complex64> {
    let u_s = lag.len() as f64;
    (-(half as i64)..=half as i64)
        .map(|s| modulated_sum(lag, beta + s as f64 / u_s))
        .collect()
}

/// Same values as [`shifted_components_direct`] through one FFT of the
/// demodulated lag product.
pub fn shifted_components_fft(lag: &[Complex64], beta: f64, half: usize) -> Vec<Complex64> {
    let u_s = lag.len();
    let mut buf: Vec<Complex64> = lag
        .iter()
        .enumerate()
        .map(|(u, &v)| v * Complex64::from_polar(1.0, -2.0 * PI * (beta * u as f64).fract()))
        .collect();
    FftPlanner::new().plan_fft_forward(u_s).process(&mut buf);
    (-(half as i64)..=half as i64)
        .map(|s| buf[s.rem_euclid(u_s as i64) as usize])
        .collect()
}

/// Covariance of `√U_s (Re ĉ, Im ĉ)` estimated by frequency smoothing of the
/// cyclic periodogram.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceEstimate {
    pub sigma: [[f64; 2]; 2],
    /// `Q̂₂,₀`, the unconjugated second-order term.
    pub q20: Complex64,
    /// `Q̂₂,₁`, the conjugated term (real, non-negative).
    pub q21: Complex64,
    pub u_sw: usize,
    pub window: SpectralWindow,
    /// Mean `|f(u)|²` of the lag product, the natural scale of Σ̂.
    pub lag_power: f64,
}

impl CovarianceEstimate {
    /// Builds the real 2×2 covariance from `Q̂₂,₀` and `Q̂₂,₁`.
    pub fn from_q(
        q20: Complex64,
        q21: Complex64,
        u_sw: usize,
        window: SpectralWindow,
        lag_power: f64,
    ) -> Self {
        let plus = (q20 + q21) / 2.0;
        let minus = (q20 - q21) / 2.0;
        let cross = (q21 - q20) / 2.0;
        Self {
            sigma: [[plus.re, minus.im], [plus.im, cross.re]],
            q20,
            q21,
            u_sw,
            window,
            lag_power,
        }
    }
}

/// Covariance estimate from precomputed shifted components
/// `F(β̃ + s/U_s)`, `s = -h ..= h`.
pub fn covariance_from_components(
    components: &[Complex64],
    u_s: usize,
    window: SpectralWindow,
    lag_power: f64,
) -> CovarianceEstimate {
    let u_sw = components.len();
    let weights = window.weights(u_sw);
    let mut q20 = Complex64::new(0.0, 0.0);
    let mut q21 = Complex64::new(0.0, 0.0);
    for (i, w) in weights.iter().enumerate() {
        let up = components[i];
        let down = components[u_sw - 1 - i];
        q20 += down * up * *w;
        q21 += up.conj() * up * *w;
    }
    let norm = 1.0 / (u_s as f64 * u_sw as f64);
    CovarianceEstimate::from_q(q20 * norm, q21 * norm, u_sw, window, lag_power)
}

fn check_window_len(u_sw: usize, u_s: usize) -> Result<()> {
    if u_sw % 2 == 0 || u_sw < 3 {
        return Err(Error::invalid(format!(
            "spectral window length must be odd and >= 3, got {u_sw}"
        )));
    }
    if u_sw >= u_s {
        return Err(Error::invalid(format!(
            "spectral window length {u_sw} must be smaller than the record length {u_s}"
        )));
    }
    Ok(())
}

/// CAF estimate and covariance at one query, sharing the lag product.
pub fn estimate_with_covariance(
    r: &ComplexStream,
    q: &CafQuery,
    u_sw: usize,
    window: SpectralWindow,
) -> Result<(CafEstimate, CovarianceEstimate)> {
    let lag = checked_lag(r.len(), q)?;
    check_window_len(u_sw, r.len())?;
    let product = lag_product(r.samples(), lag);
    let half = (u_sw - 1) / 2;
    let components = shifted_components_fft(&product, q.beta, half);
    let u_s = r.len();
    let estimate = CafEstimate {
        value: modulated_sum(&product, q.beta) / u_s as f64,
        query: *q,
        u_s,
    };
    let lag_power = crate::stream::mean_power(&product);
    Ok((estimate, covariance_from_components(&components, u_s, window, lag_power)))
}

/// Covariance of the CAF estimate at `q` using a spectral window of `u_sw`
/// (odd) bins.
pub fn estimate_covariance(
    r: &ComplexStream,
    q: &CafQuery,
    u_sw: usize,
    window: SpectralWindow,
) -> Result<CovarianceEstimate> {
    estimate_with_covariance(r, q, u_sw, window).map(|(_, cov)| cov)
}
