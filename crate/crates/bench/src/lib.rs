//! Fixed inputs shared by the pipeline benchmarks.

use ionpair::rng::SeedStream;
use ionpair::runner::{state_after_delay, Scenario};
use ionpair::tomo::{simulate_tomography, MeasurementRecord, Readout};
use ionpair::{NoiseConfig, TwoQubitState};

pub const SEED: u64 = 7;

/// Stored state after ten seconds under the default noise.
pub fn stored_state() -> TwoQubitState {
    state_after_delay(&NoiseConfig::default(), 10.0).expect("default config is valid")
}

pub fn tomography_records(shots: u64) -> Vec<MeasurementRecord> {
    simulate_tomography(&stored_state(), shots, Readout::ideal(), &mut SeedStream::new(SEED).rng(0))
}

/// Default scenario cut down to three delays.
pub fn short_scenario() -> Scenario {
    Scenario {
        delays_s: vec![1.0, 10.0, 20.0],
        ..Scenario::default()
    }
}
