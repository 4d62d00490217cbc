//! Simulated readout, state reconstruction and parity-fringe estimation.

mod inversion;
pub mod io;
mod mle;
mod parity;
mod sampling;
mod setting;

pub use inversion::{
    linear_inversion, linear_inversion_data, project_to_physical, LinearEstimate, TomographyData,
};
pub use mle::{mle_reconstruct, mle_reconstruct_data, MleResult, MLE_MAX_ITERATIONS, MLE_TOL};
pub use parity::{
    analysis_unitary, default_phase_grid, estimate_fmin_parity, exact_parities, fit_fringe, parity,
    simulate_parity_scan, validate_phase_grid, FringeFit, FringePhase, ParityEstimate, ParityScan,
    BOOTSTRAP_RESAMPLES,
};
pub use sampling::{
    outcome_probabilities, setting_probabilities, simulate_counts, simulate_tomography, Readout,
};
pub use setting::{MeasurementRecord, MeasurementSetting, OutcomeCounts, Rot};
