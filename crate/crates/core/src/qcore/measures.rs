//! Bell-state fidelity, its single-element lower bound, and the PPT test.
//!
//! Phase convention (used everywhere in the crate): the target state is
//! `|Ψ'(φ)> = (|01> + e^{iφ}|10>)/√2`, so its density matrix carries
//! `ρ01,10 = e^{-iφ}/2`. With this choice
//! `F(φ) = (ρ01,01 + ρ10,10)/2 + Re(ρ01,10 e^{iφ})`, and the phase that
//! maximises it is `φ* = -arg ρ01,10`.

use std::f64::consts::PI;

use super::basis::BasisLabel;
use super::linalg::{self, c, Mat4, C64};
use super::state::TwoQubitState;

pub const PPT_TOL: f64 = 1e-10;

/// Wraps an angle into `(-π, π]`.
pub fn wrap_phase(phi: f64) -> f64 {
    let mut p = phi.rem_euclid(2.0 * PI);
    if p > PI {
        p -= 2.0 * PI;
    }
    p
}

/// `(|01> + e^{iφ}|10>)/√2` as a density matrix.
pub fn bell_psi(phase: f64) -> TwoQubitState {
    assert!(phase.is_finite(), "bell_psi phase must be finite");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let amps = [
        C64::new(0.0, 0.0),
        c(h, 0.0),
        C64::from_polar(h, phase),
        C64::new(0.0, 0.0),
    ];
    let m = Mat4::from_fn(|r, col| amps[r] * amps[col].conj());
    TwoQubitState::from_trusted(m)
}

/// `<Ψ'(φ)|ρ|Ψ'(φ)>`, evaluated from the three matrix elements.
pub fn fidelity_vs_bell(state: &TwoQubitState, phase: f64) -> f64 {
    let p01 = state.population(BasisLabel::B01);
    let p10 = state.population(BasisLabel::B10);
    let coh = state.coherence() * C64::from_polar(1.0, phase);
    0.5 * (p01 + p10) + coh.re
}

/// `2 |ρ01,10|`.
pub fn f_min(state: &TwoQubitState) -> f64 {
    2.0 * state.coherence().norm()
}

/// Phase maximising [`fidelity_vs_bell`], in `(-π, π]`; zero when the
/// coherence vanishes.
pub fn best_phase(state: &TwoQubitState) -> f64 {
    let coh = state.coherence();
    if coh.norm() == 0.0 {
        return 0.0;
    }
    wrap_phase(-coh.arg())
}

/// Uhlmann fidelity `(tr √(√ρ σ √ρ))²`.
pub fn state_fidelity(a: &TwoQubitState, b: &TwoQubitState) -> f64 {
    let sqrt_a = psd_sqrt(a.matrix());
    let inner = sqrt_a * b.matrix() * sqrt_a;
    let (vals, _) = linalg::hermitian_eigen(&inner);
    let s: f64 = vals.iter().map(|v| v.max(0.0).sqrt()).sum();
    s * s
}

fn psd_sqrt(m: &Mat4) -> Mat4 {
    let (vals, vecs) = linalg::hermitian_eigen(m);
    let mut out = Mat4::zeros();
    for k in 0..4 {
        let v = vecs.column(k);
        out += v * v.adjoint() * c(vals[k].max(0.0).sqrt(), 0.0);
    }
    out
}

/// Partial transpose over ion 2.
pub fn partial_transpose(m: &Mat4) -> Mat4 {
    Mat4::from_fn(|r, col| {
        let (a, b) = (r >> 1, r & 1);
        let (a2, b2) = (col >> 1, col & 1);
        m[((a << 1) | b2, (a2 << 1) | b)]
    })
}

/// Smallest eigenvalue of the partial transpose.
pub fn ppt_min_eigenvalue(state: &TwoQubitState) -> f64 {
    linalg::hermitian_eigenvalues(&partial_transpose(state.matrix()))[0]
}

/// Peres-Horodecki test: entangled iff the partial transpose has a negative
/// eigenvalue (exact for two qubits).
pub fn is_entangled_ppt(state: &TwoQubitState) -> bool {
    ppt_min_eigenvalue(state) < -PPT_TOL
}
