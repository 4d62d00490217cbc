//! Scenario configs, the storage-delay experiment, decay fitting, heating
//! calibration and report files.

mod calibrate;
mod experiment;
mod fit;
mod report;
mod scenario;

pub use calibrate::{
    analysis_loss, calibrate_heating, CALIBRATION_TARGET_LOSS, CALIBRATION_TIME_S, CALIBRATION_TOL,
    LAMB_DICKE_BRACKET,
};
pub use experiment::{
    run_decay_experiment, state_after_delay, tomography_after_delay, transferred_state, DecayCurve,
    DecayRow, PointFailure, TomographySnapshot,
};
pub use fit::{fit_gaussian_decay, fit_gaussian_decay_with, FitOptions, FitResult, FIT_MAX_ITERATIONS, FIT_TOL};
pub use report::{
    decay_csv_string, emit_report, fit_summary_string, gnuplot_string, read_decay_csv, ReportFiles,
    DECAY_CSV, FIT_SUMMARY, GNUPLOT_DAT,
};
pub use scenario::{EstimationMode, PhaseMode, Scenario, DEFAULT_DELAYS_S, DEFAULT_SEED};
