//! Python bindings: waveform generation, closed-form and estimated CAF, the
//! presence test and the Monte Carlo harness. Sample records cross the
//! boundary as lists of Python `complex`.

use pyo3::exceptions::{PyArithmeticError, PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use scfdma_cyclo::caf_estimation;
use scfdma_cyclo::caf_theory::{CafQuery, CafTheory};
use scfdma_cyclo::config_file::RunConfig as CoreRunConfig;
use scfdma_cyclo::detector::{self, DetectorSettings};
use scfdma_cyclo::harness::{self, SweepAxis, SweepSpec};
use scfdma_cyclo::waveform::{self, SignalConfig as CoreSignalConfig};
use scfdma_cyclo::{Complex64, ComplexStream, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Config(_) | Error::InvalidArgument(_) | Error::DimensionMismatch { .. } => {
            PyValueError::new_err(e.to_string())
        }
        Error::Numerical(_) => PyArithmeticError::new_err(e.to_string()),
        Error::Io(_) | Error::Csv(_) => PyOSError::new_err(e.to_string()),
    }
}

fn stream(samples: Vec<Complex64>, sample_rate_hz: f64) -> PyResult<ComplexStream> {
    ComplexStream::new(samples, sample_rate_hz).map_err(to_py)
}

/// SC-FDMA numerology. Defaults describe the 1.4 MHz LTE uplink.
#[pyclass(name = "SignalConfig", from_py_object)]
#[derive(Clone)]
struct SignalConfig {
    inner: CoreSignalConfig,
}

#[pymethods]
impl SignalConfig {
    #[new]
    #[pyo3(signature = (n=72, m=128, rho=4, cp_mode="long", rolloff=0.35, delta_f_hz=15e3, modulation="16qam", rrc_span=12))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        n: usize,
        m: usize,
        rho: usize,
        cp_mode: &str,
        rolloff: f64,
        delta_f_hz: f64,
        modulation: &str,
        rrc_span: usize,
    ) -> PyResult<Self> {
        let inner = CoreSignalConfig {
            n,
            m,
            rho,
            cp_mode: cp_mode.parse().map_err(to_py)?,
            rolloff,
            delta_f_hz,
            modulation: modulation.parse().map_err(to_py)?,
            rrc_span,
        };
        inner.validate().map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m
    }

    #[getter]
    fn rho(&self) -> usize {
        self.inner.rho
    }

    #[getter]
    fn cp_mode(&self) -> String {
        self.inner.cp_mode.to_string()
    }

    #[getter]
    fn sample_rate_hz(&self) -> f64 {
        self.inner.sample_rate_hz()
    }

    fn __repr__(&self) -> String {
        let c = &self.inner;
        format!(
            "SignalConfig(n={}, m={}, rho={}, cp_mode='{}', rolloff={}, delta_f_hz={}, modulation='{}', rrc_span={})",
            c.n, c.m, c.rho, c.cp_mode, c.rolloff, c.delta_f_hz, c.modulation, c.rrc_span
        )
    }
}

/// Signal, channel and detector settings in the flat `key = value` format.
#[pyclass(name = "RunConfig", from_py_object)]
#[derive(Clone)]
struct RunConfig {
    inner: CoreRunConfig,
}

#[pymethods]
impl RunConfig {
    /// Parses configuration text; an empty string gives the defaults.
    #[new]
    #[pyo3(signature = (text=""))]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Self { inner: text.parse().map_err(to_py)? })
    }

    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        Ok(Self { inner: CoreRunConfig::from_file(path).map_err(to_py)? })
    }

    /// Sets one key, e.g. `cfg.set("snr_db", "-10")`.
    fn set(&mut self, key: &str, value: &str) -> PyResult<()> {
        let mut next = self.inner.clone();
        next.set(key, value).map_err(to_py)?;
        next.validate().map_err(to_py)?;
        self.inner = next;
        Ok(())
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    #[getter]
    fn signal(&self) -> SignalConfig {
        SignalConfig { inner: self.inner.signal.clone() }
    }

    fn __repr__(&self) -> String {
        format!("RunConfig({:?})", self.inner.to_text())
    }
}

/// Noise-free SC-FDMA record of `duration_s` seconds.
#[pyfunction]
#[pyo3(signature = (config, duration_s, seed=0))]
fn generate_frame(config: &SignalConfig, duration_s: f64, seed: u64) -> PyResult<Vec<Complex64>> {
    Ok(waveform::generate_frame(&config.inner, duration_s, seed)
        .map_err(to_py)?
        .into_samples())
}

/// Closed-form CAF at normalized cycle frequency `beta` and delay `tau`
/// (samples).
#[pyfunction]
fn theoretical_caf(config: &SignalConfig, beta: f64, tau: f64) -> PyResult<Complex64> {
    let q = CafQuery::new(beta, tau).map_err(to_py)?;
    Ok(CafTheory::new(&config.inner).map_err(to_py)?.evaluate(&q).value)
}

/// CAF estimate of `samples` at `(beta, tau)`.
#[pyfunction]
#[pyo3(signature = (samples, beta, tau, sample_rate_hz=7.68e6))]
fn estimate_caf(samples: Vec<Complex64>, beta: f64, tau: f64, sample_rate_hz: f64) -> PyResult<Complex64> {
    let r = stream(samples, sample_rate_hz)?;
    let q = CafQuery::new(beta, tau).map_err(to_py)?;
    Ok(caf_estimation::estimate_caf(&r, &q).map_err(to_py)?.value)
}

/// Chi-square(4) threshold for false-alarm probability `p_fa`.
#[pyfunction]
fn threshold(p_fa: f64) -> PyResult<f64> {
    detector::threshold(p_fa).map_err(to_py)
}

#[pyfunction]
fn flop_count(u_s: u64, u_sw: u64) -> u64 {
    detector::flop_count(u_s, u_sw)
}

/// Runs the presence test; returns a dict of the statistics and decision.
#[pyfunction]
#[pyo3(signature = (samples, config, p_fa=0.01, u_sw=None))]
fn detect<'py>(
    py: Python<'py>,
    samples: Vec<Complex64>,
    config: &SignalConfig,
    p_fa: f64,
    u_sw: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let r = stream(samples, config.inner.sample_rate_hz())?;
    let settings = DetectorSettings { p_fa, u_sw, ..DetectorSettings::default() };
    let t = detector::detect(&r, &config.inner, &settings).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("psi1", t.psi1)?;
    d.set_item("psi2", t.psi2)?;
    d.set_item("upsilon", t.upsilon)?;
    d.set_item("gamma", t.gamma)?;
    d.set_item("present", t.decision.is_present())?;
    d.set_item("u_s", t.u_s)?;
    d.set_item("u_sw", t.u_sw)?;
    Ok(d)
}

/// Received record of one simulated trial.
#[pyfunction]
#[pyo3(signature = (config, trial=0, seed=0))]
fn trial_record(config: &RunConfig, trial: u64, seed: u64) -> PyResult<Vec<Complex64>> {
    Ok(harness::trial_record(&config.inner, trial, seed)
        .map_err(to_py)?
        .into_samples())
}

/// Monte Carlo detection probability with its Wilson 95 % interval.
#[pyfunction]
#[pyo3(signature = (config, trials=300, seed=0))]
fn estimate_pd<'py>(py: Python<'py>, config: &RunConfig, trials: usize, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let cfg = config.inner.clone();
    let r = py.detach(|| harness::estimate_pd(&cfg, trials, seed)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("pd", r.pd)?;
    d.set_item("ci_lo", r.ci95.0)?;
    d.set_item("ci_hi", r.ci95.1)?;
    d.set_item("trials", r.trials)?;
    d.set_item("elapsed_s", r.elapsed_s)?;
    Ok(d)
}

/// Sweep of one scenario axis; returns the CSV table as text.
#[pyfunction]
#[pyo3(signature = (config, axis, values, trials=300, seed=0))]
fn sweep(py: Python<'_>, config: &RunConfig, axis: &str, values: Vec<f64>, trials: usize, seed: u64) -> PyResult<String> {
    let spec = SweepSpec {
        axis: axis.parse::<SweepAxis>().map_err(to_py)?,
        values,
        base: config.inner.clone(),
        trials,
        seed,
    };
    let rows = py.detach(|| harness::sweep(&spec)).map_err(to_py)?;
    let mut out = Vec::new();
    harness::write_sweep_csv(&mut out, &rows).map_err(to_py)?;
    String::from_utf8(out).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn scfdma_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<SignalConfig>()?;
    m.add_class::<RunConfig>()?;
    m.add_function(wrap_pyfunction!(generate_frame, m)?)?;
    m.add_function(wrap_pyfunction!(theoretical_caf, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_caf, m)?)?;
    m.add_function(wrap_pyfunction!(threshold, m)?)?;
    m.add_function(wrap_pyfunction!(flop_count, m)?)?;
    m.add_function(wrap_pyfunction!(detect, m)?)?;
    m.add_function(wrap_pyfunction!(trial_record, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_pd, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
