use rand::Rng;

use super::setting::{MeasurementRecord, MeasurementSetting, OutcomeCounts};
use crate::qcore::linalg::Mat4;
use crate::qcore::TwoQubitState;
use crate::stats;

/// Readout imperfections applied at detection time.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Readout {
    /// Rotation-angle deficit of every analysis pulse, radians.
    pub pulse_deficit: f64,
    /// Per-ion probability of reporting the wrong outcome.
    pub flip_probability: f64,
}

impl Readout {
    pub fn ideal() -> Self {
        Self::default()
    }
}

/// Z-basis outcome probabilities after applying `u`.
pub fn outcome_probabilities(state: &TwoQubitState, u: &Mat4, flip_probability: f64) -> [f64; 4] {
    let rotated = u * state.matrix() * u.adjoint();
    let mut p = [0.0; 4];
    for (k, pk) in p.iter_mut().enumerate() {
        *pk = rotated[(k, k)].re.max(0.0);
    }
    let total: f64 = p.iter().sum();
    for pk in p.iter_mut() {
        *pk /= total;
    }
    if flip_probability > 0.0 {
        let e = flip_probability;
        let mut q = [0.0; 4];
        for (k, qk) in q.iter_mut().enumerate() {
            for (j, pj) in p.iter().enumerate() {
                let flips = ((k ^ j) as u32).count_ones();
                *qk += pj * e.powi(flips as i32) * (1.0 - e).powi(2 - flips as i32);
            }
        }
        p = q;
    }
    p
}

pub fn setting_probabilities(
    state: &TwoQubitState,
    setting: MeasurementSetting,
    readout: Readout,
) -> [f64; 4] {
    outcome_probabilities(state, &setting.unitary(readout.pulse_deficit), readout.flip_probability)
}

/// Multinomial shot record for one setting.
pub fn simulate_counts<R: Rng + ?Sized>(
    state: &TwoQubitState,
    setting: MeasurementSetting,
    shots: u64,
    readout: Readout,
    rng: &mut R,
) -> MeasurementRecord {
    assert!(shots >= 1, "at least one shot required");
    let p = setting_probabilities(state, setting, readout);
    MeasurementRecord {
        setting,
        counts: OutcomeCounts(stats::multinomial(rng, shots, &p)),
    }
}

/// All nine settings, `shots` each, drawn in setting order from one generator.
pub fn simulate_tomography<R: Rng + ?Sized>(
    state: &TwoQubitState,
    shots: u64,
    readout: Readout,
    rng: &mut R,
) -> Vec<MeasurementRecord> {
    MeasurementSetting::all()
        .iter()
        .map(|s| simulate_counts(state, *s, shots, readout, rng))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{bell_psi, BasisLabel};
    use crate::rng::SeedStream;
    use crate::tomo::setting::Rot;

    #[test]
    fn ground_state_all_in_00() {
        let s = TwoQubitState::basis(BasisLabel::B00);
        let mut rng = SeedStream::new(1).rng(0);
        let r = simulate_counts(&s, MeasurementSetting::new(Rot::Id, Rot::Id), 500, Readout::ideal(), &mut rng);
        assert_eq!(r.counts.0, [500, 0, 0, 0]);
    }

    #[test]
    fn mixed_state_uniform_counts() {
        let s = TwoQubitState::maximally_mixed();
        let mut rng = SeedStream::new(2).rng(0);
        let n = 1_000_000u64;
        let r = simulate_counts(&s, MeasurementSetting::new(Rot::X90, Rot::Y90), n, Readout::ideal(), &mut rng);
        let sigma = (n as f64 * 0.25 * 0.75).sqrt();
        for c in r.counts.0 {
            assert!((c as f64 - 250_000.0).abs() < 4.0 * sigma);
        }
    }

    #[test]
    fn bell_state_z_outcomes() {
        let s = bell_psi(0.0);
        let p = setting_probabilities(&s, MeasurementSetting::new(Rot::Id, Rot::Id), Readout::ideal());
        assert_eq!(p, [0.0, 0.5, 0.5, 0.0]);
        let mut rng = SeedStream::new(3).rng(0);
        let r = simulate_counts(&s, MeasurementSetting::new(Rot::Id, Rot::Id), 10_000, Readout::ideal(), &mut rng);
        assert_eq!(r.counts.0[0] + r.counts.0[3], 0);
        assert!((r.counts.0[1] as f64 - 5000.0).abs() < 4.0 * 50.0);
    }

    #[test]
    fn readout_flips_mix_outcomes() {
        let s = TwoQubitState::basis(BasisLabel::B00);
        let u = MeasurementSetting::new(Rot::Id, Rot::Id).unitary(0.0);
        let p = outcome_probabilities(&s, &u, 0.1);
        assert!((p[0] - 0.81).abs() < 1e-15 && (p[3] - 0.01).abs() < 1e-15);
        assert!((p[1] - 0.09).abs() < 1e-15 && (p[2] - 0.09).abs() < 1e-15);
    }
}
