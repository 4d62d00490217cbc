//! Exact two-qubit state algebra.

mod basis;
mod kraus;
pub mod linalg;
mod measures;
mod state;
pub mod text;

pub use basis::BasisLabel;
pub use kraus::{apply_channel, KrausChannel, TP_TOL};
pub use measures::{
    best_phase, bell_psi, f_min, fidelity_vs_bell, is_entangled_ppt, partial_transpose,
    ppt_min_eigenvalue, state_fidelity, wrap_phase, PPT_TOL,
};
pub use state::{
    check_physical, PhysicalityReport, TwoQubitState, EIGEN_TOL, HERMITIAN_TOL, TRACE_TOL,
};
