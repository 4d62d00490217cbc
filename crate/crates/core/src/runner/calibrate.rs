//! Choosing the Lamb-Dicke factor from the observed heating-induced loss.

use crate::channels::{analysis_pulse_error, NoiseConfig};
use crate::error::{Error, Result};
use crate::qcore::bell_psi;
use crate::tomo::{default_phase_grid, exact_parities, fit_fringe, FringePhase};

pub const CALIBRATION_TIME_S: f64 = 20.0;
pub const CALIBRATION_TARGET_LOSS: f64 = 0.1;
pub const LAMB_DICKE_BRACKET: (f64, f64) = (0.0, 0.2);
pub const CALIBRATION_TOL: f64 = 1e-6;

fn heating_only(cfg: &NoiseConfig) -> NoiseConfig {
    NoiseConfig {
        heating_rate_phonons_per_s: cfg.heating_rate_phonons_per_s,
        nbar0: cfg.nbar0,
        lamb_dicke: cfg.lamb_dicke,
        ..NoiseConfig::noiseless()
    }
}

/// Drop of the parity-estimated fidelity of a perfect Bell state caused only
/// by the heating-degraded analysis pulses after `t` seconds.
pub fn analysis_loss(t: f64, cfg: &NoiseConfig) -> Result<f64> {
    let isolated = heating_only(cfg);
    let phases = default_phase_grid(8);
    let parities = exact_parities(&bell_psi(0.0), &phases, analysis_pulse_error(t, &isolated), 0.0);
    Ok(1.0 - fit_fringe(&phases, &parities, FringePhase::Free)?.contrast)
}

/// Bisects `lamb_dicke` so that [`analysis_loss`] at 20 s equals 0.1.
pub fn calibrate_heating(cfg: &NoiseConfig) -> Result<NoiseConfig> {
    let loss_at = |eta: f64| {
        let trial = NoiseConfig { lamb_dicke: eta, ..cfg.clone() };
        analysis_loss(CALIBRATION_TIME_S, &trial).map(|l| l - CALIBRATION_TARGET_LOSS)
    };
    let (mut lo, mut hi) = LAMB_DICKE_BRACKET;
    if loss_at(lo)? > 0.0 || loss_at(hi)? < 0.0 {
        return Err(Error::NoRoot { lo, hi });
    }
    while hi - lo > CALIBRATION_TOL {
        let mid = 0.5 * (lo + hi);
        if loss_at(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(NoiseConfig {
        lamb_dicke: 0.5 * (lo + hi),
        ..cfg.clone()
    })
}
