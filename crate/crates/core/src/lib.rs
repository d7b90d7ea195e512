//! Synthesis, second-order cyclostationarity analysis and detection of LTE
//! SC-FDMA uplink signals.
//!
//! The crate is organised along the signal path:
//!
//! * [`waveform`] builds discrete-time SC-FDMA streams (symbol mapping,
//!   DFT spreading, localized subcarrier mapping, cyclic prefix, RRC shaping).
//! * [`caf_theory`] evaluates the closed-form cyclic autocorrelation of those
//!   streams and enumerates its cycle-frequency/delay support.
//! * [`caf_estimation`] estimates the CAF and its asymptotic covariance from
//!   finite records.
//! * [`detector`] runs the two-feature chi-square presence test.
//! * [`channel`] applies multipath fading, offsets, filtering, noise,
//!   interference and quantization.
//! * [`harness`] drives Monte Carlo experiments and emits CSV tables.

pub mod caf_estimation;
pub mod caf_theory;
pub mod channel;
pub mod config_file;
pub mod detector;
mod error;
pub mod harness;
pub mod iq;
pub mod seed;
mod stream;
pub mod waveform;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use stream::ComplexStream;
