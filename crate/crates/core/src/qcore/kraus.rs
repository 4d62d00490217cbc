use super::linalg::{self, c, Mat2, Mat4};
use super::state::TwoQubitState;
use crate::error::{Error, Result};

pub const TP_TOL: f64 = 1e-10;

/// A completely positive, trace-preserving map in Kraus form.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    operators: Vec<Mat4>,
}

impl KrausChannel {
    /// Builds a channel, rejecting operator sets with `Σ K†K ≠ I`.
    pub fn new(operators: Vec<Mat4>) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::NotTracePreserving { deviation: 1.0 });
        }
        let deviation = tp_deviation(&operators);
        if !(deviation <= TP_TOL) {
            return Err(Error::NotTracePreserving { deviation });
        }
        Ok(Self { operators })
    }

    pub fn identity() -> Self {
        Self {
            operators: vec![Mat4::identity()],
        }
    }

    pub fn unitary(u: Mat4) -> Result<Self> {
        Self::new(vec![u])
    }

    /// Lifts single-ion Kraus operators onto ion `1` or `2`.
    pub fn local(ion: u8, ops: &[Mat2]) -> Result<Self> {
        let id = linalg::pauli(0);
        let lifted = ops
            .iter()
            .map(|k| match ion {
                1 => Ok(linalg::kron(k, &id)),
                2 => Ok(linalg::kron(&id, k)),
                other => Err(Error::InvalidIon(other)),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(lifted)
    }

    /// Channel acting as `rho_ij -> m_ij * rho_ij` for a real, symmetric,
    /// positive semidefinite `m` with unit diagonal (an averaged random
    /// diagonal unitary). Kraus operators are `diag(sqrt(l_k) v_k)` from the
    /// eigendecomposition of `m`.
    pub fn coherence_multiplier(m: [[f64; 4]; 4]) -> Result<Self> {
        let mc = Mat4::from_fn(|r, col| c(m[r][col], 0.0));
        let (vals, vecs) = linalg::hermitian_eigen(&mc);
        let mut ops = Vec::with_capacity(4);
        for k in 0..4 {
            let l = vals[k];
            if l < -1e-12 {
                return Err(Error::Precondition(format!(
                    "coherence multiplier not positive semidefinite (eigenvalue {l:.3e})"
                )));
            }
            if l <= 0.0 {
                continue;
            }
            let s = l.sqrt();
            ops.push(linalg::diag4([
                vecs[(0, k)] * s,
                vecs[(1, k)] * s,
                vecs[(2, k)] * s,
                vecs[(3, k)] * s,
            ]));
        }
        Self::new(ops)
    }

    /// `other ∘ self`: apply `self` first, then `other`.
    pub fn then(&self, other: &KrausChannel) -> KrausChannel {
        let mut ops = Vec::with_capacity(self.operators.len() * other.operators.len());
        for b in &other.operators {
            for a in &self.operators {
                ops.push(b * a);
            }
        }
        KrausChannel { operators: ops }
    }

    pub fn operators(&self) -> &[Mat4] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn tp_deviation(&self) -> f64 {
        tp_deviation(&self.operators)
    }

    pub fn apply(&self, state: &TwoQubitState) -> TwoQubitState {
        apply_channel(state, self)
    }
}

fn tp_deviation(ops: &[Mat4]) -> f64 {
    let sum = ops
        .iter()
        .fold(Mat4::zeros(), |acc, k| acc + k.adjoint() * k);
    linalg::max_abs(&(sum - Mat4::identity()))
}

/// `rho' = Σ K_i rho K_i†`.
pub fn apply_channel(state: &TwoQubitState, channel: &KrausChannel) -> TwoQubitState {
    let rho = state.matrix();
    let out = channel
        .operators
        .iter()
        .fold(Mat4::zeros(), |acc, k| acc + k * rho * k.adjoint());
    TwoQubitState::from_trusted(out)
}
