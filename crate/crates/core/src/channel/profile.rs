use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Maximum Doppler of the pedestrian profile (3 km/h).
pub const PEDESTRIAN_DOPPLER_HZ: f64 = 9.72;
/// Maximum Doppler of the vehicular profile (120 km/h).
pub const VEHICULAR_DOPPLER_HZ: f64 = 194.44;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    AwgnOnly,
    PedestrianA,
    VehicularA,
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_', ' '], "").as_str() {
            "awgn" | "awgnonly" => Ok(ChannelKind::AwgnOnly),
            "peda" | "pedestriana" | "pedestrian" => Ok(ChannelKind::PedestrianA),
            "veha" | "vehiculara" | "vehicular" => Ok(ChannelKind::VehicularA),
            _ => Err(Error::config(format!("unknown channel '{s}'"))),
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChannelKind::AwgnOnly => "awgn",
            ChannelKind::PedestrianA => "pedestrian_a",
            ChannelKind::VehicularA => "vehicular_a",
        })
    }
}

/// One path of a tapped delay line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tap {
    pub delay_ns: f64,
    pub power_db: f64,
}

/// Multipath power-delay profile with a Doppler spread.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelProfile {
    pub kind: ChannelKind,
    pub taps: Vec<Tap>,
    pub doppler_hz: f64,
}

const PED_A: [(f64, f64); 4] = [(0.0, 0.0), (110.0, -9.7), (190.0, -19.2), (410.0, -22.8)];
const VEH_A: [(f64, f64); 6] = [
    (0.0, 0.0),
    (310.0, -1.0),
    (710.0, -9.0),
    (1090.0, -10.0),
    (1730.0, -15.0),
    (2510.0, -20.0),
];

impl ChannelProfile {
    pub fn awgn() -> Self {
        Self {
            kind: ChannelKind::AwgnOnly,
            taps: vec![Tap { delay_ns: 0.0, power_db: 0.0 }],
            doppler_hz: 0.0,
        }
    }

    /// ITU-R M.1225 Pedestrian A.
    pub fn pedestrian_a() -> Self {
        Self::from_table(ChannelKind::PedestrianA, &PED_A, PEDESTRIAN_DOPPLER_HZ)
    }

    /// ITU-R M.1225 Vehicular A.
    pub fn vehicular_a() -> Self {
        Self::from_table(ChannelKind::VehicularA, &VEH_A, VEHICULAR_DOPPLER_HZ)
    }

    pub fn of_kind(kind: ChannelKind) -> Self {
        match kind {
            ChannelKind::AwgnOnly => Self::awgn(),
            ChannelKind::PedestrianA => Self::pedestrian_a(),
            ChannelKind::VehicularA => Self::vehicular_a(),
        }
    }

    fn from_table(kind: ChannelKind, table: &[(f64, f64)], doppler_hz: f64) -> Self {
        Self {
            kind,
            taps: table
                .iter()
                .map(|&(delay_ns, power_db)| Tap { delay_ns, power_db })
                .collect(),
            doppler_hz,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.taps.is_empty() {
            return Err(Error::config("channel profile needs at least one tap"));
        }
        if self.taps.iter().any(|t| !(t.delay_ns >= 0.0 && t.power_db.is_finite())) {
            return Err(Error::config("tap delays must be non-negative and powers finite"));
        }
        if self.taps.windows(2).any(|w| w[1].delay_ns <= w[0].delay_ns) {
            return Err(Error::config("tap delays must be strictly increasing"));
        }
        if !(self.doppler_hz >= 0.0 && self.doppler_hz.is_finite()) {
            return Err(Error::config("Doppler frequency must be non-negative"));
        }
        Ok(())
    }

    /// Taps rounded to the sample grid, coincident taps merged by adding
    /// powers, normalized to unit total power. Returns `(delay, linear power)`.
    pub fn sampled_taps(&self, sample_rate_hz: f64) -> Vec<(usize, f64)> {
        let mut out: Vec<(usize, f64)> = Vec::new();
        for t in &self.taps {
            let delay = (t.delay_ns * 1e-9 * sample_rate_hz).round() as usize;
            let power = 10f64.powf(t.power_db / 10.0);
            match out.last_mut() {
                Some(last) if last.0 == delay => last.1 += power,
                _ => out.push((delay, power)),
            }
        }
        let total: f64 = out.iter().map(|t| t.1).sum();
        out.iter_mut().for_each(|t| t.1 /= total);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pedestrian_taps_at_lte_rate() {
        let taps = ChannelProfile::pedestrian_a().sampled_taps(7.68e6);
        let delays: Vec<usize> = taps.iter().map(|t| t.0).collect();
        assert_eq!(delays, vec![0, 1, 3]);
        let total: f64 = taps.iter().map(|t| t.1).sum();
        assert!((total - 1.0).abs() < 1e-15);
        let p = |db: f64| 10f64.powf(db / 10.0);
        let norm = p(0.0) + p(-9.7) + p(-19.2) + p(-22.8);
        assert!((taps[1].1 - (p(-9.7) + p(-19.2)) / norm).abs() < 1e-15);
    }

    #[test]
    fn vehicular_taps_at_lte_rate() {
        let taps = ChannelProfile::vehicular_a().sampled_taps(7.68e6);
        let delays: Vec<usize> = taps.iter().map(|t| t.0).collect();
        assert_eq!(delays, vec![0, 2, 5, 8, 13, 19]);
    }

    #[test]
    fn validation() {
        let mut p = ChannelProfile::vehicular_a();
        p.validate().unwrap();
        p.taps.swap(1, 2);
        assert!(p.validate().is_err());
        assert!(ChannelProfile { taps: vec![], ..ChannelProfile::awgn() }.validate().is_err());
    }

    #[test]
    fn kind_names() {
        assert_eq!("PedA".parse::<ChannelKind>().unwrap(), ChannelKind::PedestrianA);
        assert_eq!("vehicular_a".parse::<ChannelKind>().unwrap(), ChannelKind::VehicularA);
        assert!("rician".parse::<ChannelKind>().is_err());
    }
}
