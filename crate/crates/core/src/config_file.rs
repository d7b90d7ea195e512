//! Flat `key = value` run configuration.
//!
//! Keys mirror the fields of [`SignalConfig`], [`Scenario`] and
//! [`DetectorSettings`]. Blank lines and `#` comments are ignored; unknown or
//! repeated keys are errors.
//!
//! ```text
//! # PedA at -10 dB
//! channel = pedestrian_a
//! snr_db = -10
//! p_fa = 0.1
//! quantizer_bits = 16
//! sir_db = none
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::caf_estimation::SpectralWindow;
use crate::channel::{ChannelKind, ChannelProfile, Scenario};
use crate::detector::DetectorSettings;
use crate::waveform::SignalConfig;
use crate::{Error, Result};

/// Everything a CLI run needs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    pub signal: SignalConfig,
    pub scenario: Scenario,
    pub u_sw: Option<usize>,
    pub window: SpectralWindow,
}

impl RunConfig {
    pub fn detector_settings(&self) -> DetectorSettings {
        DetectorSettings {
            p_fa: self.scenario.p_fa,
            u_sw: self.u_sw,
            window: self.window,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.signal.validate()?;
        self.scenario.validate()
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        text.parse()
    }

    /// Applies one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let sig = &mut self.signal;
        let sc = &mut self.scenario;
        match key {
            "n" => sig.n = num(key, value)?,
            "m" => sig.m = num(key, value)?,
            "rho" => sig.rho = num(key, value)?,
            "cp_mode" => sig.cp_mode = value.parse()?,
            "rolloff" => sig.rolloff = num(key, value)?,
            "delta_f_hz" => sig.delta_f_hz = num(key, value)?,
            "modulation" => sig.modulation = value.parse()?,
            "rrc_span" => sig.rrc_span = num(key, value)?,
            "channel" => {
                let doppler = sc.profile.doppler_hz;
                let kind_changed = ChannelKind::from_str(value)? != sc.profile.kind;
                sc.profile = ChannelProfile::of_kind(value.parse()?);
                if !kind_changed {
                    sc.profile.doppler_hz = doppler;
                }
            }
            "doppler_hz" => sc.profile.doppler_hz = num(key, value)?,
            "snr_db" => sc.snr_db = num(key, value)?,
            "sir_db" => sc.sir_db = optional(key, value, &["none"])?,
            "cfo_hz" => sc.cfo_hz = num(key, value)?,
            "phase_offset" => sc.phase_offset = optional(key, value, &["random", "none"])?,
            "timing_offset" => sc.timing_offset = optional(key, value, &["random", "none"])?,
            "observation_s" => sc.observation_s = num(key, value)?,
            "quantizer_bits" => sc.quantizer_bits = optional(key, value, &["none", "off"])?,
            "overloading_factor" => sc.overloading_factor = num(key, value)?,
            "p_fa" => sc.p_fa = num(key, value)?,
            "receive_cutoff_hz" => sc.receive_cutoff_hz = num(key, value)?,
            "receive_center_hz" => sc.receive_center_hz = optional(key, value, &["auto", "none"])?,
            "signal_present" => sc.signal_present = num(key, value)?,
            "u_sw" => self.u_sw = optional(key, value, &["auto", "none"])?,
            "window" => self.window = value.parse()?,
            _ => return Err(Error::config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Renders the configuration in the same format it is parsed from.
    pub fn to_text(&self) -> String {
        fn opt<T: ToString>(v: &Option<T>, none: &str) -> String {
            v.as_ref().map_or_else(|| none.to_string(), T::to_string)
        }
        let s = &self.signal;
        let c = &self.scenario;
        let mut out = String::new();
        let rows: Vec<(&str, String)> = vec![
            ("n", s.n.to_string()),
            ("m", s.m.to_string()),
            ("rho", s.rho.to_string()),
            ("cp_mode", s.cp_mode.to_string()),
            ("rolloff", s.rolloff.to_string()),
            ("delta_f_hz", s.delta_f_hz.to_string()),
            ("modulation", s.modulation.to_string()),
            ("rrc_span", s.rrc_span.to_string()),
            ("channel", c.profile.kind.to_string()),
            ("doppler_hz", c.profile.doppler_hz.to_string()),
            ("snr_db", c.snr_db.to_string()),
            ("sir_db", opt(&c.sir_db, "none")),
            ("cfo_hz", c.cfo_hz.to_string()),
            ("phase_offset", opt(&c.phase_offset, "random")),
            ("timing_offset", opt(&c.timing_offset, "random")),
            ("observation_s", c.observation_s.to_string()),
            ("quantizer_bits", opt(&c.quantizer_bits, "none")),
            ("overloading_factor", c.overloading_factor.to_string()),
            ("p_fa", c.p_fa.to_string()),
            ("receive_cutoff_hz", c.receive_cutoff_hz.to_string()),
            ("receive_center_hz", opt(&c.receive_center_hz, "auto")),
            ("signal_present", c.signal_present.to_string()),
            ("u_sw", opt(&self.u_sw, "auto")),
            ("window", self.window.to_string()),
        ];
        for (k, v) in rows {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}

fn num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::config(format!("cannot parse {key} = '{value}'")))
}

fn optional<T: FromStr>(key: &str, value: &str, absent: &[&str]) -> Result<Option<T>> {
    if absent.iter().any(|a| value.eq_ignore_ascii_case(a)) {
        Ok(None)
    } else {
        num(key, value).map(Some)
    }
}

impl FromStr for RunConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut seen = BTreeSet::new();
        // Channel first so an explicit doppler_hz overrides the profile default.
        let mut entries: Vec<(usize, &str, &str)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::config(format!("line {}: expected key = value", i + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if !seen.insert(k) {
                return Err(Error::config(format!("line {}: duplicate key '{k}'", i + 1)));
            }
            entries.push((i, k, v));
        }
        entries.sort_by_key(|&(i, k, _)| (k != "channel", i));
        for (i, k, v) in entries {
            cfg.set(k, v)
                .map_err(|e| Error::config(format!("line {}: {}", i + 1, e)))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
