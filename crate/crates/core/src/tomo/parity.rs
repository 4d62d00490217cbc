//! Single-element estimation of `2|ρ01,10|` from a parity fringe.
//!
//! Both ions receive π/2 analysis pulses with phases `+Δφ/2` and `-Δφ/2`.
//! For ideal pulses the parity is
//! `P(Δφ) = 2|ρ01,10| cos(Δφ - φ) + 2 Re(ρ00,11)·(const)`, with `φ` the
//! Bell phase of the [`crate::qcore`] convention, so a cosine fit
//! `C cos(Δφ - φ0) + b` returns `C = 2|ρ01,10|` and `φ0 = φ`. Keeping
//! `φ1 + φ2 = 0` turns the `ρ00,11` term into part of the offset `b`.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix3, Vector3};
use rand::Rng;

use super::sampling::outcome_probabilities;
use super::setting::OutcomeCounts;
use crate::channels::{analysis_pulse_error, NoiseConfig};
use crate::error::{Error, Result};
use crate::qcore::linalg::Mat4;
use crate::qcore::{wrap_phase, TwoQubitState};
use crate::rng::SeedStream;
use crate::sequence::local_rotations;
use crate::stats;

pub const BOOTSTRAP_RESAMPLES: usize = 200;

/// `(n00 + n11 - n01 - n10) / shots`.
pub fn parity(counts: &OutcomeCounts) -> f64 {
    let n = counts.0;
    let shots = counts.shots();
    assert!(shots >= 1, "parity needs at least one shot");
    (n[0] as f64 + n[3] as f64 - n[1] as f64 - n[2] as f64) / shots as f64
}

/// Analysis unitary for relative phase `delta_phi`, pulses short by `deficit`.
pub fn analysis_unitary(delta_phi: f64, deficit: f64) -> Mat4 {
    let theta = std::f64::consts::FRAC_PI_2 - deficit;
    local_rotations(theta, 0.5 * delta_phi, theta, -0.5 * delta_phi)
}

pub fn exact_parities(state: &TwoQubitState, phases: &[f64], deficit: f64, flip: f64) -> Vec<f64> {
    phases
        .iter()
        .map(|&d| {
            let p = outcome_probabilities(state, &analysis_unitary(d, deficit), flip);
            p[0] + p[3] - p[1] - p[2]
        })
        .collect()
}

/// Equally spaced relative phases covering one period.
pub fn default_phase_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| TAU * k as f64 / n as f64).collect()
}

/// Needs four distinct phases (mod 2π) with no circular gap wider than π.
pub fn validate_phase_grid(phases: &[f64]) -> Result<()> {
    let mut wrapped: Vec<f64> = phases
        .iter()
        .map(|p| {
            if !p.is_finite() {
                f64::NAN
            } else {
                p.rem_euclid(TAU)
            }
        })
        .collect();
    if wrapped.iter().any(|p| p.is_nan()) {
        return Err(Error::DegeneratePhases("non-finite phase".into()));
    }
    wrapped.sort_by(|a, b| a.total_cmp(b));
    wrapped.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    if wrapped.len() > 1 && (wrapped[0] + TAU - wrapped[wrapped.len() - 1]) < 1e-9 {
        wrapped.pop();
    }
    if wrapped.len() < 4 {
        return Err(Error::DegeneratePhases(format!(
            "{} distinct phases, need at least 4",
            wrapped.len()
        )));
    }
    let mut gap: f64 = wrapped[0] + TAU - wrapped[wrapped.len() - 1];
    for w in wrapped.windows(2) {
        gap = gap.max(w[1] - w[0]);
    }
    if gap > PI + 1e-12 {
        return Err(Error::DegeneratePhases(format!(
            "phases leave a gap of {gap:.3} rad; the grid must cover a full period"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FringePhase {
    /// Fit the fringe phase together with the contrast.
    Free,
    /// Project onto a known fringe phase.
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringeFit {
    pub contrast: f64,
    pub phase: f64,
    pub offset: f64,
}

/// Least-squares fit of `C cos(Δφ - φ0) + b`.
pub fn fit_fringe(phases: &[f64], parities: &[f64], mode: FringePhase) -> Result<FringeFit> {
    if phases.len() != parities.len() {
        return Err(Error::FitFailed("phase and parity lists differ in length".into()));
    }
    validate_phase_grid(phases)?;
    match mode {
        FringePhase::Free => {
            let mut ata = Matrix3::<f64>::zeros();
            let mut atb = Vector3::<f64>::zeros();
            for (&d, &y) in phases.iter().zip(parities) {
                let row = Vector3::new(d.cos(), d.sin(), 1.0);
                ata += row * row.transpose();
                atb += row * y;
            }
            let sol = ata
                .lu()
                .solve(&atb)
                .ok_or_else(|| Error::FitFailed("singular fringe design matrix".into()))?;
            let (a, b) = (sol[0], sol[1]);
            Ok(FringeFit {
                contrast: a.hypot(b),
                phase: if a == 0.0 && b == 0.0 { 0.0 } else { wrap_phase(b.atan2(a)) },
                offset: sol[2],
            })
        }
        FringePhase::Fixed(phi0) => {
            let (mut sxx, mut sx, mut sxy, mut sy) = (0.0, 0.0, 0.0, 0.0);
            let n = phases.len() as f64;
            for (&d, &y) in phases.iter().zip(parities) {
                let x = (d - phi0).cos();
                sxx += x * x;
                sx += x;
                sxy += x * y;
                sy += y;
            }
            let det = n * sxx - sx * sx;
            if det.abs() < 1e-12 {
                return Err(Error::FitFailed("singular fixed-phase fringe fit".into()));
            }
            let contrast = (n * sxy - sx * sy) / det;
            let offset = (sy - contrast * sx) / n;
            Ok(FringeFit {
                contrast,
                phase: wrap_phase(phi0),
                offset,
            })
        }
    }
}

/// A scanned parity fringe with its raw counts.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityScan {
    pub relative_phases: Vec<f64>,
    pub parities: Vec<f64>,
    pub shots_per_point: u64,
    pub counts: Vec<OutcomeCounts>,
}

impl ParityScan {
    pub fn from_counts(relative_phases: Vec<f64>, counts: Vec<OutcomeCounts>) -> Result<Self> {
        if relative_phases.len() != counts.len() {
            return Err(Error::Precondition("phase and count lists differ in length".into()));
        }
        let shots_per_point = counts.first().map(|c| c.shots()).unwrap_or(0);
        if counts.iter().any(|c| c.shots() == 0) {
            return Err(Error::ZeroShots("parity point".into()));
        }
        let parities = counts.iter().map(parity).collect();
        Ok(Self {
            relative_phases,
            parities,
            shots_per_point,
            counts,
        })
    }

    pub fn fit(&self, mode: FringePhase) -> Result<FringeFit> {
        fit_fringe(&self.relative_phases, &self.parities, mode)
    }

    /// Bootstrap standard error of the contrast: every point is redrawn
    /// from its own empirical outcome frequencies.
    pub fn bootstrap_stderr<R: Rng + ?Sized>(
        &self,
        mode: FringePhase,
        resamples: usize,
        rng: &mut R,
    ) -> Result<f64> {
        let mut cs = Vec::with_capacity(resamples);
        for _ in 0..resamples {
            let pars: Vec<f64> = self
                .counts
                .iter()
                .map(|c| {
                    let redrawn = OutcomeCounts(stats::multinomial(rng, c.shots(), &c.frequencies()));
                    parity(&redrawn)
                })
                .collect();
            cs.push(fit_fringe(&self.relative_phases, &pars, mode)?.contrast);
        }
        Ok(stats::std_dev(&cs))
    }
}

pub fn simulate_parity_scan<R: Rng + ?Sized>(
    state: &TwoQubitState,
    phases: &[f64],
    shots_per_point: u64,
    deficit: f64,
    flip: f64,
    rng: &mut R,
) -> ParityScan {
    let counts = phases
        .iter()
        .map(|&d| {
            let p = outcome_probabilities(state, &analysis_unitary(d, deficit), flip);
            OutcomeCounts(stats::multinomial(rng, shots_per_point, &p))
        })
        .collect();
    ParityScan::from_counts(phases.to_vec(), counts).expect("lengths match by construction")
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParityEstimate {
    /// Fringe contrast, the estimate of `2|ρ01,10|`.
    pub fmin: f64,
    pub phase: f64,
    pub stderr: f64,
    pub scan: ParityScan,
}

/// Scans the analysis phase on `state` after a delay `t` (which sets the
/// heating-induced pulse deficit) and fits the fringe.
pub fn estimate_fmin_parity(
    state: &TwoQubitState,
    phases: &[f64],
    shots_per_point: u64,
    t: f64,
    cfg: &NoiseConfig,
    seed: u64,
) -> Result<ParityEstimate> {
    validate_phase_grid(phases)?;
    if shots_per_point == 0 {
        return Err(Error::ZeroShots("parity point".into()));
    }
    let stream = SeedStream::new(seed);
    let deficit = analysis_pulse_error(t, cfg);
    let scan = simulate_parity_scan(
        state,
        phases,
        shots_per_point,
        deficit,
        cfg.readout_error,
        &mut stream.rng(0),
    );
    let fit = scan.fit(FringePhase::Free)?;
    let stderr = scan.bootstrap_stderr(FringePhase::Free, BOOTSTRAP_RESAMPLES, &mut stream.rng(1))?;
    Ok(ParityEstimate {
        fmin: fit.contrast,
        phase: fit.phase,
        stderr,
        scan,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::differential_phase;
    use crate::qcore::{apply_channel, bell_psi, best_phase, f_min};
    use crate::sequence::analysis_rotation;

    fn werner(p: f64) -> TwoQubitState {
        bell_psi(0.0).mix_white(p)
    }

    #[test]
    fn parity_values() {
        assert_eq!(parity(&OutcomeCounts([10, 0, 0, 0])), 1.0);
        assert_eq!(parity(&OutcomeCounts([5, 5, 5, 5])), 0.0);
        assert_eq!(parity(&OutcomeCounts([0, 3, 1, 0])), -1.0);
    }

    #[test]
    fn analysis_unitary_matches_analysis_rotation() {
        let cfg = NoiseConfig {
            lamb_dicke: 0.08,
            ..NoiseConfig::default()
        };
        let s = werner(0.7);
        let d = 0.9;
        let via_seq = analysis_rotation(&s, d / 2.0, -d / 2.0, 12.0, &cfg);
        let u = analysis_unitary(d, analysis_pulse_error(12.0, &cfg));
        let direct = u * s.matrix() * u.adjoint();
        assert!(crate::qcore::linalg::max_abs(&(direct - via_seq.matrix())) < 1e-15);
    }

    #[test]
    fn bell_parity_zero_phase() {
        // matrix oracle: P(0) for (|01>+|10>)/√2 is 2 Re ρ01,10 = 1
        let p = exact_parities(&bell_psi(0.0), &[0.0, PI], 0.0, 0.0);
        assert!((p[0] - 1.0).abs() < 1e-12 && (p[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn contrast_equals_coherence_noiseless() {
        let phases = default_phase_grid(8);
        let mut rng = SeedStream::new(31).rng(0);
        let mut states = vec![bell_psi(0.0), bell_psi(1.2), werner(0.8), TwoQubitState::maximally_mixed()];
        for _ in 0..50 {
            states.push(TwoQubitState::random(&mut rng));
        }
        for s in &states {
            let fit = fit_fringe(&phases, &exact_parities(s, &phases, 0.0, 0.0), FringePhase::Free).unwrap();
            assert!((fit.contrast - f_min(s)).abs() < 1e-12);
            if f_min(s) > 1e-6 {
                assert!((wrap_phase(fit.phase - best_phase(s))).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn fixed_phase_mode_matches_free() {
        let phases = default_phase_grid(8);
        let s = bell_psi(0.6).mix_white(0.7);
        let par = exact_parities(&s, &phases, 0.0, 0.0);
        let fixed = fit_fringe(&phases, &par, FringePhase::Fixed(0.6)).unwrap();
        assert!((fixed.contrast - 0.7).abs() < 1e-12);
    }

    #[test]
    fn grid_validation() {
        assert!(validate_phase_grid(&[0.0, 1.0, 2.0]).is_err());
        assert!(validate_phase_grid(&[0.0, 0.1, 0.2, 0.3, 0.4]).is_err());
        assert!(validate_phase_grid(&[0.0, TAU, 2.0 * TAU, 1.0]).is_err());
        assert!(validate_phase_grid(&default_phase_grid(4)).is_ok());
        let inclusive: Vec<f64> = (0..=8).map(|k| TAU * k as f64 / 8.0).collect();
        assert!(validate_phase_grid(&inclusive).is_ok());
    }

    #[test]
    fn estimates_with_shots() {
        let cfg = NoiseConfig::noiseless();
        let phases = default_phase_grid(8);
        let e = estimate_fmin_parity(&werner(0.8), &phases, 2000, 0.0, &cfg, 41).unwrap();
        assert!((e.fmin - 0.8).abs() < 4.0 * e.stderr, "{} ± {}", e.fmin, e.stderr);
        let m = estimate_fmin_parity(&TwoQubitState::maximally_mixed(), &phases, 2000, 0.0, &cfg, 42).unwrap();
        assert!(m.fmin < 4.0 * m.stderr.max(0.01));
    }

    #[test]
    fn phase_covariance() {
        let cfg = NoiseConfig::noiseless();
        let phases = default_phase_grid(8);
        let s = werner(0.8);
        let shifted = apply_channel(&s, &differential_phase(1.3));
        let a = estimate_fmin_parity(&s, &phases, 500, 0.0, &cfg, 7).unwrap();
        let par = exact_parities(&shifted, &phases, 0.0, 0.0);
        let fit = fit_fringe(&phases, &par, FringePhase::Free).unwrap();
        assert!((fit.contrast - 0.8).abs() < 1e-12);
        assert!((wrap_phase(fit.phase - 1.3)).abs() < 1e-9);
        let b = estimate_fmin_parity(&shifted, &phases, 500, 0.0, &cfg, 7).unwrap();
        assert!((a.fmin - b.fmin).abs() < 3.0 * (a.stderr.powi(2) + b.stderr.powi(2)).sqrt());
    }

    #[test]
    fn heating_deficit_lowers_contrast() {
        let phases = default_phase_grid(8);
        let ideal = fit_fringe(&phases, &exact_parities(&bell_psi(0.0), &phases, 0.0, 0.0), FringePhase::Free).unwrap();
        let short = fit_fringe(&phases, &exact_parities(&bell_psi(0.0), &phases, 0.2, 0.0), FringePhase::Free).unwrap();
        assert!(short.contrast < ideal.contrast);
        assert!((short.contrast - 0.2f64.cos().powi(2)).abs() < 1e-12);
    }
}
