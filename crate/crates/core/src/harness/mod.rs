//! Monte Carlo experiment driver.
//!
//! Each trial draws its waveform, fading, interference, offsets and noise
//! from seeds split off a master seed by stage name and trial index, so runs
//! are reproducible regardless of how trials are scheduled across threads.

mod calibrate;
mod profile;
mod sweep;
mod trial;

pub use calibrate::{calibrate_pfa, chi_square4_cdf, ks_p_value, ks_statistic, Calibration};
pub use profile::{caf_profile, write_profile_csv, ProfileMode, ProfileRow};
pub use sweep::{sweep, write_sweep_csv, SweepAxis, SweepRow, SweepSpec};
pub use trial::{estimate_pd, run_trial, trial_record, wilson_interval, MonteCarloResult};

/// Trials per point when none is requested.
pub const DEFAULT_TRIALS: usize = 300;
