use rand::Rng;
use rand_distr::StandardNormal;

use super::basis::BasisLabel;
use super::linalg::{self, c, Mat4, C64};
use crate::error::{Error, Result};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const EIGEN_TOL: f64 = 1e-8;

/// A physical two-qubit density matrix.
///
/// Construction through [`TwoQubitState::new`] checks Hermiticity, unit trace
/// and positivity, so every operation taking a `&TwoQubitState` can assume
/// a physical input.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    matrix: Mat4,
}

/// Violations found by [`check_physical`]; all zero for an ideal state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalityReport {
    pub hermitian_deviation: f64,
    pub trace_deviation: f64,
    pub min_eigenvalue: f64,
}

impl PhysicalityReport {
    pub fn is_physical(&self) -> bool {
        self.hermitian_deviation <= HERMITIAN_TOL
            && self.trace_deviation <= TRACE_TOL
            && self.min_eigenvalue >= -EIGEN_TOL
    }
}

pub fn check_physical(m: &Mat4) -> PhysicalityReport {
    let herm = linalg::max_abs(&(m - m.adjoint()));
    let tr = linalg::trace(m);
    let trace_deviation = (tr - c(1.0, 0.0)).norm();
    let min_eigenvalue = linalg::hermitian_eigenvalues(m)[0];
    PhysicalityReport {
        hermitian_deviation: herm,
        trace_deviation,
        min_eigenvalue,
    }
}

impl TwoQubitState {
    pub fn new(matrix: Mat4) -> Result<Self> {
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonPhysical("non-finite entry".into()));
        }
        let r = check_physical(&matrix);
        if !r.is_physical() {
            return Err(Error::NonPhysical(format!(
                "hermitian dev {:.3e}, trace dev {:.3e}, min eigenvalue {:.3e}",
                r.hermitian_deviation, r.trace_deviation, r.min_eigenvalue
            )));
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix known to be physical by construction (e.g. the output
    /// of a trace-preserving channel applied to a physical state).
    pub(crate) fn from_trusted(matrix: Mat4) -> Self {
        debug_assert!(
            check_physical(&matrix).hermitian_deviation < 1e-8,
            "trusted matrix is far from Hermitian"
        );
        Self { matrix }
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.matrix
    }

    pub fn into_matrix(self) -> Mat4 {
        self.matrix
    }

    pub fn element(&self, row: BasisLabel, col: BasisLabel) -> C64 {
        self.matrix[(row.index(), col.index())]
    }

    /// `<01|rho|10>`.
    pub fn coherence(&self) -> C64 {
        self.element(BasisLabel::B01, BasisLabel::B10)
    }

    pub fn population(&self, l: BasisLabel) -> f64 {
        self.element(l, l).re
    }

    pub fn pure(amplitudes: [C64; 4]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !(norm > 0.0) {
            return Err(Error::NonPhysical("zero state vector".into()));
        }
        let s = 1.0 / norm.sqrt();
        let m = Mat4::from_fn(|r, col| amplitudes[r] * amplitudes[col].conj() * s * s);
        Self::new(m)
    }

    pub fn basis(l: BasisLabel) -> Self {
        let mut m = Mat4::zeros();
        m[(l.index(), l.index())] = c(1.0, 0.0);
        Self { matrix: m }
    }

    pub fn maximally_mixed() -> Self {
        Self {
            matrix: Mat4::identity() * c(0.25, 0.0),
        }
    }

    /// `weight * self + (1 - weight) * I/4`.
    pub fn mix_white(&self, weight: f64) -> Self {
        let id = Mat4::identity() * c((1.0 - weight) * 0.25, 0.0);
        Self {
            matrix: self.matrix * c(weight, 0.0) + id,
        }
    }

    /// Convex combination `p * self + (1 - p) * other`.
    pub fn mix(&self, other: &Self, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Precondition(format!("mixing weight {p} outside [0,1]")));
        }
        Ok(Self {
            matrix: self.matrix * c(p, 0.0) + other.matrix * c(1.0 - p, 0.0),
        })
    }

    /// Draws `G G† / tr(G G†)` with `G` a matrix of standard complex Gaussians.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let g = Mat4::from_fn(|_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            c(re, im)
        });
        let gg = g * g.adjoint();
        let tr = linalg::trace(&gg).re;
        let mut m = gg / c(tr, 0.0);
        // enforce exact Hermiticity
        m = (m + m.adjoint()) * c(0.5, 0.0);
        Self { matrix: m }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        linalg::frobenius(&(self.matrix - other.matrix))
    }

    pub fn purity(&self) -> f64 {
        linalg::trace(&(self.matrix * self.matrix)).re
    }
}
