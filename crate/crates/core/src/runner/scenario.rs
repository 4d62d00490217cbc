//! Scenario definition and the flat `key = value` config format.
//!
//! ```text
//! # comments start with '#'
//! noise.tau_dephasing_s = 34
//! noise.lamb_dicke = 0.1
//! scenario.delays_s = 0.5, 1, 2, 5, 10, 20
//! scenario.mode = parity_fmin
//! ```
//!
//! Every `noise.*` key is a field of [`NoiseConfig`]. The `scenario.*` keys
//! are `delays_s`, `shots_per_setting`, `cycles_per_point`, `mode`,
//! `phase_mode`, `phase_points` and `seed`. Unknown keys are rejected.

use std::fmt;
use std::str::FromStr;

use crate::channels::NoiseConfig;
use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 2005;
pub const DEFAULT_DELAYS_S: [f64; 11] = [0.5, 1.0, 2.0, 3.0, 5.0, 7.5, 10.0, 12.5, 15.0, 17.5, 20.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimationMode {
    /// Nine-setting tomography and maximum-likelihood reconstruction.
    FullTomography,
    /// Parity fringe over scanned analysis phases.
    ParityFmin,
}

impl EstimationMode {
    pub fn as_str(self) -> &'static str {
        match self {
            EstimationMode::FullTomography => "full_tomography",
            EstimationMode::ParityFmin => "parity_fmin",
        }
    }
}

impl fmt::Display for EstimationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EstimationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full_tomography" => Ok(EstimationMode::FullTomography),
            "parity_fmin" => Ok(EstimationMode::ParityFmin),
            other => Err(Error::Config(format!(
                "unknown mode '{other}' (expected full_tomography or parity_fmin)"
            ))),
        }
    }
}

/// How the parity fringe phase is obtained at each delay.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseMode {
    /// Fitted together with the contrast.
    Free,
    /// Fixed to the coherent phase expected from the field gradient.
    Gradient,
}

impl FromStr for PhaseMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free" => Ok(PhaseMode::Free),
            "gradient" => Ok(PhaseMode::Gradient),
            other => Err(Error::Config(format!(
                "unknown phase mode '{other}' (expected free or gradient)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub noise: NoiseConfig,
    pub delays_s: Vec<f64>,
    /// Shots per tomography setting, or per parity phase point, in each cycle.
    pub shots_per_setting: u64,
    /// Experimental cycles per delay; each cycle draws its own detuning.
    pub cycles_per_point: usize,
    pub mode: EstimationMode,
    pub phase_mode: PhaseMode,
    pub phase_points: usize,
    pub seed: u64,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            noise: NoiseConfig::default(),
            delays_s: DEFAULT_DELAYS_S.to_vec(),
            shots_per_setting: 50,
            cycles_per_point: 200,
            mode: EstimationMode::ParityFmin,
            phase_mode: PhaseMode::Free,
            phase_points: 8,
            seed: DEFAULT_SEED,
        }
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.noise.validate()?;
        if self.delays_s.is_empty() {
            return Err(Error::Config("scenario.delays_s is empty".into()));
        }
        if self.delays_s.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(Error::Config("scenario.delays_s must be finite and >= 0".into()));
        }
        if self.delays_s.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Config("scenario.delays_s must be sorted".into()));
        }
        if self.shots_per_setting == 0 {
            return Err(Error::Config("scenario.shots_per_setting must be >= 1".into()));
        }
        if self.cycles_per_point == 0 {
            return Err(Error::Config("scenario.cycles_per_point must be >= 1".into()));
        }
        if self.phase_points < 4 {
            return Err(Error::Config("scenario.phase_points must be >= 4".into()));
        }
        Ok(())
    }

    /// Parses a config file on top of the defaults.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut sc = Scenario::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            sc.set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {}", lineno + 1, strip_prefix(e))))?;
        }
        sc.validate()?;
        Ok(sc)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if let Some(field) = key.strip_prefix("noise.") {
            let v: f64 = num(key, value)?;
            let n = &mut self.noise;
            let slot = match field {
                "d_lifetime_s" => &mut n.d_lifetime_s,
                "gradient_hz" => &mut n.gradient_hz,
                "tau_dephasing_s" => &mut n.tau_dephasing_s,
                "heating_rate_phonons_per_s" => &mut n.heating_rate_phonons_per_s,
                "nbar0" => &mut n.nbar0,
                "lamb_dicke" => &mut n.lamb_dicke,
                "scattering_rate_per_s" => &mut n.scattering_rate_per_s,
                "collision_rate_per_s" => &mut n.collision_rate_per_s,
                "prep_fidelity" => &mut n.prep_fidelity,
                "transfer_loss" => &mut n.transfer_loss,
                "readout_error" => &mut n.readout_error,
                _ => return Err(Error::Config(format!("unknown key '{key}'"))),
            };
            *slot = v;
            return Ok(());
        }
        match key {
            "scenario.delays_s" => {
                self.delays_s = value
                    .split(',')
                    .map(|s| num(key, s.trim()))
                    .collect::<Result<_>>()?;
            }
            "scenario.shots_per_setting" => self.shots_per_setting = num(key, value)?,
            "scenario.cycles_per_point" => self.cycles_per_point = num(key, value)?,
            "scenario.mode" => self.mode = value.parse()?,
            "scenario.phase_mode" => self.phase_mode = value.parse()?,
            "scenario.phase_points" => self.phase_points = num(key, value)?,
            "scenario.seed" => self.seed = num(key, value)?,
            _ => return Err(Error::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }
}

fn num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("bad value '{value}' for {key}")))
}

fn strip_prefix(e: Error) -> String {
    match e {
        Error::Config(m) => m,
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let s = Scenario::default();
        s.validate().unwrap();
        assert_eq!(s.delays_s.len(), 11);
        assert_eq!(s.cycles_per_point, 200);
    }

    #[test]
    fn parses_config() {
        let text = "\
# storage test
noise.tau_dephasing_s = 20
noise.lamb_dicke = 0.1   # calibrated
scenario.delays_s = 0, 1.5, 3
scenario.mode = full_tomography
scenario.seed = 9
";
        let s = Scenario::from_config_str(text).unwrap();
        assert_eq!(s.noise.tau_dephasing_s, 20.0);
        assert_eq!(s.noise.lamb_dicke, 0.1);
        assert_eq!(s.delays_s, vec![0.0, 1.5, 3.0]);
        assert_eq!(s.mode, EstimationMode::FullTomography);
        assert_eq!(s.seed, 9);
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            "noise.tau = 3",
            "scenario.colour = red",
            "scenario.delays_s = 3, 1",
            "scenario.cycles_per_point = 0",
            "scenario.mode = guess",
            "noise.prep_fidelity = 1.5",
            "just text",
            "noise.gradient_hz = abc",
        ] {
            let e = Scenario::from_config_str(text).unwrap_err();
            assert!(matches!(e, Error::Config(_)), "{text}: {e:?}");
        }
    }
}
