use std::collections::BTreeMap;

use super::sampling::outcome_probabilities;
use super::setting::{MeasurementRecord, MeasurementSetting};
use crate::error::{Error, Result};
use crate::qcore::linalg::{self, c, Mat4};
use crate::qcore::{check_physical, TwoQubitState};

/// Per-setting outcome weights (counts, or probabilities for noiseless
/// checks) for all nine settings, in `MeasurementSetting::all()` order.
#[derive(Debug, Clone, PartialEq)]
pub struct TomographyData {
    pub(crate) entries: Vec<(MeasurementSetting, [f64; 4])>,
}

impl TomographyData {
    pub fn from_records(records: &[MeasurementRecord]) -> Result<Self> {
        let mut merged: BTreeMap<MeasurementSetting, [f64; 4]> = BTreeMap::new();
        for r in records {
            if r.shots() == 0 {
                return Err(Error::ZeroShots(r.setting.to_string()));
            }
            let e = merged.entry(r.setting).or_insert([0.0; 4]);
            for k in 0..4 {
                e[k] += r.counts.0[k] as f64;
            }
        }
        let mut entries = Vec::with_capacity(9);
        for s in MeasurementSetting::all() {
            let w = merged
                .get(&s)
                .ok_or_else(|| Error::MissingSetting(s.to_string()))?;
            entries.push((s, *w));
        }
        Ok(Self { entries })
    }

    /// Exact outcome probabilities of `state` under ideal analysis pulses.
    pub fn exact(state: &TwoQubitState) -> Self {
        let entries = MeasurementSetting::all()
            .into_iter()
            .map(|s| (s, outcome_probabilities(state, &s.unitary(0.0), 0.0)))
            .collect();
        Self { entries }
    }

    /// Multinomial log-likelihood `Σ n ln p` of `state`.
    pub fn log_likelihood(&self, state: &Mat4) -> f64 {
        let mut ll = 0.0;
        for (s, w) in &self.entries {
            let u = s.unitary(0.0);
            let rotated = u * state * u.adjoint();
            for k in 0..4 {
                if w[k] > 0.0 {
                    ll += w[k] * rotated[(k, k)].re.max(1e-300).ln();
                }
            }
        }
        ll
    }

    fn frequencies(&self) -> Vec<(MeasurementSetting, [f64; 4])> {
        self.entries
            .iter()
            .map(|(s, w)| {
                let n: f64 = w.iter().sum();
                (*s, w.map(|x| x / n))
            })
            .collect()
    }
}

/// Which Pauli (index 1..=3) and sign `U† Z U` equals for one ion's rotation.
fn heisenberg_pauli(u: &linalg::Mat2) -> (usize, f64) {
    let z = linalg::pauli(3);
    let o = u.adjoint() * z * u;
    let mut best = (3, 1.0, 0.0);
    for k in 1..=3 {
        let overlap = (linalg::pauli(k) * o).trace().re / 2.0;
        if overlap.abs() > best.2 {
            best = (k, overlap.signum(), overlap.abs());
        }
    }
    (best.0, best.1)
}

/// Linear-inversion estimate; positivity is reported, not enforced.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearEstimate {
    pub matrix: Mat4,
    /// Two-qubit Pauli expectation values `s_ij = <σ_i ⊗ σ_j>`, `s_00 = 1`.
    pub correlations: [[f64; 4]; 4],
    pub min_eigenvalue: f64,
}

impl LinearEstimate {
    pub fn is_physical(&self) -> bool {
        check_physical(&self.matrix).is_physical()
    }

    /// The estimate as a state, if it satisfies the physicality invariants.
    pub fn to_state(&self) -> Result<TwoQubitState> {
        TwoQubitState::new(self.matrix)
    }

    /// Nearest physical state in Frobenius norm (eigenvalues projected onto
    /// the probability simplex).
    pub fn project_physical(&self) -> TwoQubitState {
        project_to_physical(&self.matrix)
    }
}

pub fn project_to_physical(m: &Mat4) -> TwoQubitState {
    let (vals, vecs) = linalg::hermitian_eigen(m);
    let mut sorted: Vec<f64> = vals.iter().copied().collect();
    sorted.sort_by(|a, b| b.total_cmp(a));
    // simplex projection threshold
    let mut cumulative = 0.0;
    let mut shift = 0.0;
    for (k, v) in sorted.iter().enumerate() {
        cumulative += v;
        let candidate = (cumulative - 1.0) / (k + 1) as f64;
        if v - candidate > 0.0 {
            shift = candidate;
        }
    }
    let mut out = Mat4::zeros();
    for k in 0..4 {
        let l = (vals[k] - shift).max(0.0);
        if l > 0.0 {
            let v = vecs.column(k);
            out += v * v.adjoint() * c(l, 0.0);
        }
    }
    out = (out + out.adjoint()) * c(0.5, 0.0);
    let tr = linalg::trace(&out).re;
    TwoQubitState::new(out / c(tr, 0.0)).expect("projection yields a physical state")
}

pub fn linear_inversion(records: &[MeasurementRecord]) -> Result<LinearEstimate> {
    Ok(linear_inversion_data(&TomographyData::from_records(records)?))
}

pub fn linear_inversion_data(data: &TomographyData) -> LinearEstimate {
    let mut sums = [[0.0; 4]; 4];
    let mut weights = [[0.0; 4]; 4];
    for (s, f) in data.frequencies() {
        let (t1, p1) = s.rot1.angles();
        let (t2, p2) = s.rot2.angles();
        let (a, sa) = heisenberg_pauli(&crate::sequence::rotation(t1, p1));
        let (b, sb) = heisenberg_pauli(&crate::sequence::rotation(t2, p2));
        // outcome bit k1 of ion 1, k2 of ion 2; Z eigenvalue (-1)^bit
        let mut e1 = 0.0;
        let mut e2 = 0.0;
        let mut e12 = 0.0;
        for k in 0..4 {
            let z1 = if k >> 1 == 0 { 1.0 } else { -1.0 };
            let z2 = if k & 1 == 0 { 1.0 } else { -1.0 };
            e1 += z1 * f[k];
            e2 += z2 * f[k];
            e12 += z1 * z2 * f[k];
        }
        for (i, j, v) in [(a, 0, sa * e1), (0, b, sb * e2), (a, b, sa * sb * e12)] {
            sums[i][j] += v;
            weights[i][j] += 1.0;
        }
    }
    let mut corr = [[0.0; 4]; 4];
    corr[0][0] = 1.0;
    let mut m = Mat4::identity() * c(0.25, 0.0);
    for i in 0..4 {
        for j in 0..4 {
            if (i, j) == (0, 0) || weights[i][j] == 0.0 {
                continue;
            }
            corr[i][j] = sums[i][j] / weights[i][j];
            m += linalg::kron(&linalg::pauli(i), &linalg::pauli(j)) * c(0.25 * corr[i][j], 0.0);
        }
    }
    let min_eigenvalue = linalg::hermitian_eigenvalues(&m)[0];
    LinearEstimate {
        matrix: m,
        correlations: corr,
        min_eigenvalue,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{bell_psi, fidelity_vs_bell, BasisLabel};
    use crate::rng::SeedStream;
    use crate::tomo::sampling::{simulate_tomography, Readout};
    use crate::tomo::setting::{OutcomeCounts, Rot};

    #[test]
    fn heisenberg_map() {
        use crate::sequence::rotation;
        use std::f64::consts::FRAC_PI_2;
        assert_eq!(heisenberg_pauli(&rotation(0.0, 0.0)), (3, 1.0));
        assert_eq!(heisenberg_pauli(&rotation(FRAC_PI_2, 0.0)), (2, 1.0));
        assert_eq!(heisenberg_pauli(&rotation(FRAC_PI_2, FRAC_PI_2)), (1, -1.0));
    }

    #[test]
    fn exact_data_inverts_exactly() {
        let mut rng = SeedStream::new(4).rng(0);
        for _ in 0..20 {
            let s = TwoQubitState::random(&mut rng);
            let est = linear_inversion_data(&TomographyData::exact(&s));
            assert!(linalg::max_abs(&(est.matrix - s.matrix())) < 1e-12);
        }
    }

    #[test]
    fn bell_state_from_shots() {
        let mut rng = SeedStream::new(5).rng(0);
        let recs = simulate_tomography(&bell_psi(0.0), 10_000, Readout::ideal(), &mut rng);
        let est = linear_inversion(&recs).unwrap();
        assert!(fidelity_vs_bell(&est.project_physical(), 0.0) >= 0.99);
    }

    #[test]
    fn mixed_state_correlations_near_zero() {
        let mut rng = SeedStream::new(6).rng(0);
        let shots = 5_000u64;
        let recs = simulate_tomography(&TwoQubitState::maximally_mixed(), shots, Readout::ideal(), &mut rng);
        let est = linear_inversion(&recs).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if (i, j) == (0, 0) {
                    continue;
                }
                // single-ion terms average three settings
                let n = if i == 0 || j == 0 { 3.0 } else { 1.0 };
                let sigma = 1.0 / (shots as f64 * n).sqrt();
                assert!(est.correlations[i][j].abs() < 4.0 * sigma, "s[{i}][{j}]");
            }
        }
    }

    #[test]
    fn missing_and_empty_settings() {
        let mut rng = SeedStream::new(7).rng(0);
        let mut recs = simulate_tomography(&bell_psi(0.0), 100, Readout::ideal(), &mut rng);
        recs.pop();
        assert!(matches!(linear_inversion(&recs), Err(Error::MissingSetting(_))));
        recs.push(MeasurementRecord {
            setting: MeasurementSetting::new(Rot::Y90, Rot::Y90),
            counts: OutcomeCounts([0; 4]),
        });
        assert!(matches!(linear_inversion(&recs), Err(Error::ZeroShots(_))));
    }

    #[test]
    fn projection_fixes_negative_eigenvalue() {
        let m = linalg::diag4([c(0.7, 0.0), c(0.4, 0.0), c(-0.1, 0.0), c(0.0, 0.0)]);
        let p = project_to_physical(&m);
        assert!((p.population(BasisLabel::B00) - 0.65).abs() < 1e-12);
        assert!((p.population(BasisLabel::B01) - 0.35).abs() < 1e-12);
        assert!(p.population(BasisLabel::B10).abs() < 1e-12);
    }
}
