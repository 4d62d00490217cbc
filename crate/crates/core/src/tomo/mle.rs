//! Maximum-likelihood reconstruction by the `R ρ R` fixed-point iteration.
//!
//! `R(ρ) = (1/S) Σ_s Σ_k (f_sk / p_sk(ρ)) Π_sk` with `S` settings, so the
//! fixed point has `R = 1`. The raw update is `ρ <- N[R ρ R]`. A raw step
//! that lowers the likelihood is replaced by the diluted map
//! `R_ε = (1 + εR)/(1 + ε)` with `ε = 0.5`, which never lowers it.

use super::inversion::{project_to_physical, TomographyData};
use super::setting::MeasurementRecord;
use crate::error::{Error, Result};
use crate::qcore::linalg::{self, c, Mat4};
use crate::qcore::TwoQubitState;

pub const MLE_TOL: f64 = 1e-10;
pub const MLE_MAX_ITERATIONS: usize = 10_000;
const DILUTION: f64 = 0.5;
const EXTRAPOLATE_EVERY: usize = 20;
const OPTIMALITY_TOL: f64 = 1e-6;
const MAX_RESCUES: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct MleResult {
    pub state: TwoQubitState,
    pub iterations: usize,
    pub log_likelihood: f64,
    pub diluted: bool,
}

pub fn mle_reconstruct(records: &[MeasurementRecord]) -> Result<MleResult> {
    mle_reconstruct_data(&TomographyData::from_records(records)?)
}

struct Projectors {
    // per setting: readout unitary and outcome frequencies
    settings: Vec<(Mat4, [f64; 4])>,
}

impl Projectors {
    fn new(data: &TomographyData) -> Self {
        let settings = data
            .entries
            .iter()
            .map(|(s, w)| {
                let n: f64 = w.iter().sum();
                (s.unitary(0.0), w.map(|x| x / n))
            })
            .collect();
        Self { settings }
    }

    /// `R(ρ)` and the frequency-weighted log-likelihood at `ρ`.
    fn r_operator(&self, rho: &Mat4) -> (Mat4, f64) {
        let mut r = Mat4::zeros();
        let mut ll = 0.0;
        for (u, f) in &self.settings {
            let rotated = u * rho * u.adjoint();
            let mut d = [c(0.0, 0.0); 4];
            for k in 0..4 {
                if f[k] > 0.0 {
                    let p = rotated[(k, k)].re.max(1e-300);
                    d[k] = c(f[k] / p, 0.0);
                    ll += f[k] * p.ln();
                }
            }
            r += u.adjoint() * linalg::diag4(d) * u;
        }
        (r / c(self.settings.len() as f64, 0.0), ll)
    }
}

fn normalized(m: Mat4) -> Mat4 {
    let h = (m + m.adjoint()) * c(0.5, 0.0);
    let tr = linalg::trace(&h).re;
    h / c(tr, 0.0)
}

/// Aitken jump along a geometrically shrinking step sequence, projected
/// back onto the state space. Near an ill-conditioned or rank-deficient
/// optimum the fixed-point map contracts slowly along a few directions.
fn extrapolate(rho: &Mat4, prev: &Mat4, last: &Mat4) -> Option<Mat4> {
    let dot = |a: &Mat4, b: &Mat4| a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum::<f64>();
    let denom = dot(prev, prev);
    if denom == 0.0 {
        return None;
    }
    let q = dot(prev, last) / denom;
    if !(0.0..0.9999).contains(&q) {
        return None;
    }
    let cand = rho + last * c(q / (1.0 - q), 0.0);
    Some(project_to_physical(&normalized(cand)).into_matrix())
}

pub fn mle_reconstruct_data(data: &TomographyData) -> Result<MleResult> {
    let proj = Projectors::new(data);
    let mut rho = Mat4::identity() * c(0.25, 0.0);
    let (mut r, mut ll) = proj.r_operator(&rho);
    let mut diluted = false;
    let id = Mat4::identity();
    let mut residual = f64::INFINITY;
    let mut previous: Option<Mat4> = None;
    let mut rescues = 0;

    for it in 1..=MLE_MAX_ITERATIONS {
        let step = |r: &Mat4, dilute: bool| {
            let g = if dilute {
                (id + r * c(DILUTION, 0.0)) / c(1.0 + DILUTION, 0.0)
            } else {
                *r
            };
            normalized(g * rho * g)
        };
        let mut next = step(&r, false);
        let (mut r_next, mut ll_next) = proj.r_operator(&next);
        if ll_next < ll - 1e-15 * ll.abs().max(1.0) {
            diluted = true;
            next = step(&r, true);
            (r_next, ll_next) = proj.r_operator(&next);
        }
        let delta = next - rho;
        residual = linalg::max_abs(&delta);
        rho = next;
        r = r_next;
        ll = ll_next;
        if residual < MLE_TOL && linalg::hermitian_eigenvalues(&r)[3] > 1.0 + OPTIMALITY_TOL && rescues < MAX_RESCUES {
            // stuck on a face of the state space that does not hold the maximum
            rescues += 1;
            rho = rho * c(0.9, 0.0) + id * c(0.025, 0.0);
            (r, ll) = proj.r_operator(&rho);
            previous = None;
            continue;
        }
        if residual < MLE_TOL {
            let state = TwoQubitState::new(rho)?;
            return Ok(MleResult {
                log_likelihood: data.log_likelihood(state.matrix()),
                state,
                iterations: it,
                diluted,
            });
        }
        if it % EXTRAPOLATE_EVERY == 0 {
            if let Some(jump) = previous.as_ref().and_then(|d| extrapolate(&rho, d, &delta)) {
                let (r_jump, ll_jump) = proj.r_operator(&jump);
                if ll_jump >= ll {
                    rho = jump;
                    r = r_jump;
                    ll = ll_jump;
                    previous = None;
                    continue;
                }
            }
        }
        previous = Some(delta);
    }
    Err(Error::NoConvergence {
        iterations: MLE_MAX_ITERATIONS,
        residual,
    })
}
