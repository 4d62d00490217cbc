//! Noise processes acting on the ion pair.

mod config;
mod noise;

pub use config::{NoiseConfig, COLLISION_RATE_BOUND_PER_S, SCATTERING_RATE_BOUND_PER_S};
pub use noise::{
    analysis_pulse_error, bitflip_scattering, collective_dephasing, collision_depolarizing,
    cycle_channel, deterministic_phase, detuning_sigma_hz, differential_phase,
    gaussian_coherence_factor, gaussian_gradient_dephasing, gradient_phase, heating_nbar,
    sample_run_detuning, scattering_flip_probability, spontaneous_decay_sd, storage_channel,
    storage_losses,
};
