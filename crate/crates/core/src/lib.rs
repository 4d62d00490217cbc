//! Simulation of a long-lived Bell state of two trapped ions.
//!
//! The crate covers preparation of `(|01> + |10>)/√2`, the transfer into the
//! decoherence-free Zeeman subspace, the noise processes acting during a
//! storage delay, simulated readout with shot noise, state reconstruction,
//! parity-fringe estimation of `2|ρ01,10|`, and the Gaussian decay fit.

pub mod channels;
pub mod error;
pub mod qcore;
pub mod rng;
pub mod runner;
pub mod sequence;
pub mod stats;
pub mod tomo;

pub use channels::NoiseConfig;
pub use error::{Error, Result};
pub use qcore::{
    apply_channel, best_phase, bell_psi, f_min, fidelity_vs_bell, is_entangled_ppt, BasisLabel,
    KrausChannel, TwoQubitState,
};
pub use runner::{DecayCurve, FitResult, Scenario};
pub use sequence::{PulseSpec, SequenceResult};
pub use tomo::{MeasurementRecord, MeasurementSetting, ParityScan};
