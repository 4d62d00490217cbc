use crate::error::{Error, Result};

/// Upper bound on the residual-light bit-flip rate: under one scattered
/// photon in eight minutes.
pub const SCATTERING_RATE_BOUND_PER_S: f64 = 1.0 / 480.0;
/// Upper bound on the background-gas collision rate.
pub const COLLISION_RATE_BOUND_PER_S: f64 = 3e-3;

/// Physical rates and strengths for every noise process in the simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseConfig {
    /// Spontaneous-decay lifetime of the D5/2 level, seconds.
    pub d_lifetime_s: f64,
    /// Differential Zeeman shift from the field gradient, Hz.
    pub gradient_hz: f64,
    /// Gaussian coherence decay constant of the stored Bell state, seconds.
    pub tau_dephasing_s: f64,
    pub heating_rate_phonons_per_s: f64,
    pub nbar0: f64,
    /// Lamb-Dicke factor setting the Rabi-frequency loss `Ω0 (1 - η² n̄)`.
    /// Zero disables heating-induced analysis errors; see
    /// `runner::calibrate_heating` for the calibrated value.
    pub lamb_dicke: f64,
    pub scattering_rate_per_s: f64,
    pub collision_rate_per_s: f64,
    pub prep_fidelity: f64,
    pub transfer_loss: f64,
    /// Per-ion probability of misreading a detection outcome.
    pub readout_error: f64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            d_lifetime_s: 1.17,
            gradient_hz: 30.0,
            tau_dephasing_s: 34.0,
            heating_rate_phonons_per_s: 1.0,
            nbar0: 0.0,
            lamb_dicke: 0.0,
            scattering_rate_per_s: 0.0,
            collision_rate_per_s: 0.0,
            prep_fidelity: 0.96,
            transfer_loss: 0.07,
            readout_error: 0.0,
        }
    }
}

impl NoiseConfig {
    /// No noise at all: perfect preparation, transfer, storage and readout.
    pub fn noiseless() -> Self {
        Self {
            d_lifetime_s: f64::INFINITY,
            gradient_hz: 0.0,
            tau_dephasing_s: f64::INFINITY,
            heating_rate_phonons_per_s: 0.0,
            nbar0: 0.0,
            lamb_dicke: 0.0,
            scattering_rate_per_s: 0.0,
            collision_rate_per_s: 0.0,
            prep_fidelity: 1.0,
            transfer_loss: 0.0,
            readout_error: 0.0,
        }
    }

    /// Scattering and collisions switched on at their measured upper bounds.
    pub fn with_rate_ceilings(mut self) -> Self {
        self.scattering_rate_per_s = SCATTERING_RATE_BOUND_PER_S;
        self.collision_rate_per_s = COLLISION_RATE_BOUND_PER_S;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let nonneg = [
            ("d_lifetime_s", self.d_lifetime_s),
            ("gradient_hz", self.gradient_hz.abs()),
            ("heating_rate_phonons_per_s", self.heating_rate_phonons_per_s),
            ("nbar0", self.nbar0),
            ("lamb_dicke", self.lamb_dicke),
            ("scattering_rate_per_s", self.scattering_rate_per_s),
            ("collision_rate_per_s", self.collision_rate_per_s),
        ];
        for (name, v) in nonneg {
            if v.is_nan() || v < 0.0 {
                return Err(Error::Config(format!("noise.{name} must be >= 0, got {v}")));
            }
        }
        if !self.gradient_hz.is_finite() {
            return Err(Error::Config("noise.gradient_hz must be finite".into()));
        }
        if !(self.tau_dephasing_s > 0.0) {
            return Err(Error::Config(format!(
                "noise.tau_dephasing_s must be > 0, got {}",
                self.tau_dephasing_s
            )));
        }
        if !(self.d_lifetime_s > 0.0) {
            return Err(Error::Config("noise.d_lifetime_s must be > 0".into()));
        }
        for (name, v) in [
            ("prep_fidelity", self.prep_fidelity),
            ("transfer_loss", self.transfer_loss),
            ("readout_error", self.readout_error),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Config(format!("noise.{name} must lie in [0,1], got {v}")));
            }
        }
        Ok(())
    }
}
