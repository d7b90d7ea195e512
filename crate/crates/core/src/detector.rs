//! Two-feature cyclostationarity test for SC-FDMA presence.
//!
//! Feature 1 is the CP-induced correlation at zero cycle frequency and delay
//! `ρM`; feature 2 is the symbol-rate cycle frequency `1/ρ` at zero delay.
//! Each yields a statistic `Ψ = U_s ĉ Σ̂⁻¹ ĉᵀ` that is asymptotically
//! chi-square with two degrees of freedom when the feature is absent; their
//! sum `Υ` is compared with the chi-square(4) quantile for the target false
//! alarm probability.

use std::fmt;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::caf_estimation::{
    default_window_len, estimate_with_covariance, CafEstimate, CovarianceEstimate, SpectralWindow,
};
use crate::caf_theory::CafQuery;
use crate::waveform::SignalConfig;
use crate::{ComplexStream, Error, Result};

/// Condition number above which Σ̂ is regularized.
pub const MAX_CONDITION: f64 = 1e12;
/// Relative diagonal loading applied to an ill-conditioned Σ̂.
pub const REGULARIZATION: f64 = 1e-10;

/// `(Re ĉ, Im ĉ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector {
    pub c_hat: [f64; 2],
}

impl From<&CafEstimate> for FeatureVector {
    fn from(e: &CafEstimate) -> Self {
        Self {
            c_hat: [e.value.re, e.value.im],
        }
    }
}

/// One feature's statistic with the quantities it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureStatistic {
    pub psi: f64,
    pub estimate: CafEstimate,
    pub covariance: CovarianceEstimate,
    /// Whether diagonal loading was needed to invert Σ̂.
    pub regularized: bool,
}

/// Inverts a symmetric 2×2 matrix, loading its diagonal when the condition
/// number exceeds [`MAX_CONDITION`]. `scale` is the magnitude below which the
/// trace counts as numerically zero.
fn invert_sym2(sigma: [[f64; 2]; 2], scale: f64) -> Result<([[f64; 2]; 2], bool)> {
    let [[a, b], [c, d]] = sigma;
    let off = 0.5 * (b + c);
    let trace = a + d;
    let det = a * d - off * off;
    let cond = |trace: f64, det: f64| -> f64 {
        let disc = (0.25 * trace * trace - det).max(0.0).sqrt();
        let hi = 0.5 * trace + disc;
        let lo = 0.5 * trace - disc;
        if lo <= 0.0 {
            f64::INFINITY
        } else {
            hi / lo
        }
    };
    if !(trace.is_finite() && det.is_finite()) || trace <= 1e-12 * scale {
        return Err(Error::Numerical(format!(
            "covariance estimate is degenerate (trace {trace})"
        )));
    }
    let (mut a, mut d, mut det) = (a, d, det);
    let mut regularized = false;
    if cond(trace, det) > MAX_CONDITION {
        let load = REGULARIZATION * trace / 2.0;
        a += load;
        d += load;
        det = a * d - off * off;
        regularized = true;
        if cond(a + d, det) > MAX_CONDITION || det <= 0.0 {
            return Err(Error::Numerical(
                "covariance estimate stays singular after regularization".into(),
            ));
        }
    }
    Ok(([[d / det, -off / det], [-off / det, a / det]], regularized))
}

/// Full detail of `Ψ` at one query.
pub fn feature_statistic_detail(
    r: &ComplexStream,
    q: &CafQuery,
    u_sw: usize,
    window: SpectralWindow,
) -> Result<FeatureStatistic> {
    let (estimate, covariance) = estimate_with_covariance(r, q, u_sw, window)?;
    let (inv, regularized) = invert_sym2(covariance.sigma, covariance.lag_power)?;
    let [x, y] = FeatureVector::from(&estimate).c_hat;
    let quad = x * (inv[0][0] * x + inv[0][1] * y) + y * (inv[1][0] * x + inv[1][1] * y);
    let psi = estimate.u_s as f64 * quad;
    if !psi.is_finite() {
        return Err(Error::Numerical("test statistic is not finite".into()));
    }
    Ok(FeatureStatistic {
        psi: psi.max(0.0),
        estimate,
        covariance,
        regularized,
    })
}

/// `Ψ = U_s ĉ Σ̂⁻¹ ĉᵀ` at one (cycle frequency, delay).
pub fn feature_statistic(
    r: &ComplexStream,
    q: &CafQuery,
    u_sw: usize,
    window: SpectralWindow,
) -> Result<f64> {
    feature_statistic_detail(r, q, u_sw, window).map(|f| f.psi)
}

/// Upper `p_fa` quantile of the chi-square distribution with four degrees
/// of freedom.
pub fn threshold(p_fa: f64) -> Result<f64> {
    check_pfa(p_fa)?;
    let chi = ChiSquared::new(4.0).map_err(|e| Error::Numerical(e.to_string()))?;
    Ok(chi.inverse_cdf(1.0 - p_fa))
}

fn check_pfa(p_fa: f64) -> Result<()> {
    if !(p_fa > 0.0 && p_fa < 1.0) {
        return Err(Error::invalid(format!(
            "false alarm probability must lie in (0, 1), got {p_fa}"
        )));
    }
    Ok(())
}

/// Floating point operations of one decision:
/// `10 U_s log₂U_s + 22 U_s + 50 U_sw + 42`.
pub fn flop_count(u_s: u64, u_sw: u64) -> u64 {
    let u = u_s as f64;
    (10.0 * u * u.log2() + 22.0 * u + 50.0 * u_sw as f64 + 42.0).round() as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    /// H1: SC-FDMA present.
    Present,
    /// H0: SC-FDMA absent.
    Absent,
}

impl Decision {
    pub fn is_present(self) -> bool {
        self == Decision::Present
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Present => "H1_present",
            Decision::Absent => "H0_absent",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestResult {
    pub psi1: f64,
    pub psi2: f64,
    pub upsilon: f64,
    pub gamma: f64,
    pub decision: Decision,
    pub p_fa_target: f64,
    pub u_s: usize,
    pub u_sw: usize,
}

impl TestResult {
    /// `key=value` lines, one field per line.
    pub fn to_record(&self) -> String {
        format!(
            "psi1={}\npsi2={}\nupsilon={}\ngamma={}\ndecision={}\nu_s={}\nu_sw={}\np_fa={}\n",
            self.psi1, self.psi2, self.upsilon, self.gamma, self.decision, self.u_s, self.u_sw, self.p_fa_target
        )
    }
}

/// Detector settings beyond the signal numerology.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorSettings {
    pub p_fa: f64,
    /// Spectral window length; `None` selects the odd integer nearest
    /// `0.006 U_s`.
    pub u_sw: Option<usize>,
    pub window: SpectralWindow,
}

impl Default for DetectorSettings {
    fn default() -> Self {
        Self {
            p_fa: 0.01,
            u_sw: None,
            window: SpectralWindow::Rectangular,
        }
    }
}

/// The two feature queries for `config`.
pub fn feature_queries(config: &SignalConfig) -> [CafQuery; 2] {
    let rho = config.rho as f64;
    [
        CafQuery { beta: 0.0, tau: rho * config.m as f64 },
        CafQuery { beta: 1.0 / rho, tau: 0.0 },
    ]
}

/// Runs the presence test on `r`.
pub fn detect(r: &ComplexStream, config: &SignalConfig, settings: &DetectorSettings) -> Result<TestResult> {
    check_pfa(settings.p_fa)?;
    let min_len = config.rho * config.m + 1;
    if r.len() < min_len {
        return Err(Error::invalid(format!(
            "record of {} samples is too short; need at least {min_len}",
            r.len()
        )));
    }
    let u_s = r.len();
    let u_sw = settings.u_sw.unwrap_or_else(|| default_window_len(u_s));
    let [cp, symbol] = feature_queries(config);
    let psi1 = feature_statistic(r, &cp, u_sw, settings.window)?;
    let psi2 = feature_statistic(r, &symbol, u_sw, settings.window)?;
    let upsilon = psi1 + psi2;
    let gamma = threshold(settings.p_fa)?;
    Ok(TestResult {
        psi1,
        psi2,
        upsilon,
        gamma,
        decision: if upsilon >= gamma { Decision::Present } else { Decision::Absent },
        p_fa_target: settings.p_fa,
        u_s,
        u_sw,
    })
}

/// `Ψ` at the mirrored symbol-rate cycle frequency `-1/ρ`, for diagnostics.
pub fn mirror_feature_statistic(
    r: &ComplexStream,
    config: &SignalConfig,
    settings: &DetectorSettings,
) -> Result<f64> {
    let u_sw = settings.u_sw.unwrap_or_else(|| default_window_len(r.len()));
    let q = CafQuery { beta: -1.0 / config.rho as f64, tau: 0.0 };
    feature_statistic(r, &q, u_sw, settings.window)
}
