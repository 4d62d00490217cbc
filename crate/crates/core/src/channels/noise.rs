//! Closed-form channels for every process acting on the ion pair.
//!
//! The field gradient enters through the differential phase unitary
//! `U(θ) = exp(-iθ(Z1 - Z2)/4) = diag(1, e^{-iθ/2}, e^{iθ/2}, 1)`, which
//! multiplies `ρ01,10` by `e^{-iθ}` and so advances the Bell phase by `θ`.
//!
//! Slow gradient drift is a quasi-static differential detuning `δ`
//! (angular) drawn once per experimental cycle from `N(0, σ²)`. Averaging the
//! unitary over `δ` multiplies `ρ01,10` by `E[e^{-iδt}] = e^{-σ²t²/2}`; with
//! `σ = √2/τ` this is exactly `e^{-(t/τ)²}`. The other coherences pick up
//! the same kernel scaled by their differential charge
//! `exp(-σ²t²(d_i - d_j)²/32)`, `d = (0, 2, -2, 0)`.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::config::NoiseConfig;
use crate::qcore::linalg::{self, c, Mat2, C64};
use crate::qcore::{BasisLabel, KrausChannel};

const DIFFERENTIAL_CHARGE: [f64; 4] = [0.0, 2.0, -2.0, 0.0];

fn differential_phase_unitary(theta: f64) -> crate::qcore::linalg::Mat4 {
    linalg::diag4(DIFFERENTIAL_CHARGE.map(|d| C64::from_polar(1.0, -theta * d / 4.0)))
}

/// Unitary advancing the Bell phase by `θ` (radians).
pub fn differential_phase(theta: f64) -> KrausChannel {
    KrausChannel::unitary(differential_phase_unitary(theta)).expect("diagonal phases are unitary")
}

/// Coherent phase from the static gradient, `φ(t) = 2π · gradient_hz · t`.
pub fn deterministic_phase(t: f64, cfg: &NoiseConfig) -> KrausChannel {
    assert!(t >= 0.0, "delay must be non-negative");
    differential_phase(gradient_phase(t, cfg))
}

pub fn gradient_phase(t: f64, cfg: &NoiseConfig) -> f64 {
    2.0 * PI * cfg.gradient_hz * t
}

/// Random phase common to both ions' `|1>` levels, averaged over a Gaussian
/// of rms `strength` (radians). Coherences between states with excitation
/// numbers `n_i, n_j` are multiplied by `exp(-strength²(n_i - n_j)²/2)`, so
/// the `{|01>, |10>}` block is untouched.
pub fn collective_dephasing(strength: f64) -> KrausChannel {
    assert!(strength >= 0.0, "dephasing strength must be non-negative");
    let n = BasisLabel::ALL.map(|l| l.excitations() as f64);
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let dn = n[i] - n[j];
            m[i][j] = (-0.5 * strength * strength * dn * dn).exp();
        }
    }
    KrausChannel::coherence_multiplier(m).expect("gaussian kernel is positive semidefinite")
}

/// Coherence factor of the slow-drift ensemble at delay `t`: `e^{-(t/τ)²}`.
pub fn gaussian_coherence_factor(t: f64, cfg: &NoiseConfig) -> f64 {
    (-(t / cfg.tau_dephasing_s).powi(2)).exp()
}

/// Ensemble average of the drift unitaries over `δ ~ N(0, 2/τ²)`.
pub fn gaussian_gradient_dephasing(t: f64, cfg: &NoiseConfig) -> KrausChannel {
    assert!(t >= 0.0, "delay must be non-negative");
    let sigma = SQRT_2 / cfg.tau_dephasing_s;
    let var_t2 = (sigma * t).powi(2);
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let dd = DIFFERENTIAL_CHARGE[i] - DIFFERENTIAL_CHARGE[j];
            m[i][j] = (-var_t2 * dd * dd / 32.0).exp();
        }
    }
    KrausChannel::coherence_multiplier(m).expect("gaussian kernel is positive semidefinite")
}

/// Standard deviation of the per-cycle differential detuning, Hz.
pub fn detuning_sigma_hz(cfg: &NoiseConfig) -> f64 {
    SQRT_2 / (2.0 * PI * cfg.tau_dephasing_s)
}

/// One per-cycle draw of the differential detuning, Hz.
pub fn sample_run_detuning<R: Rng + ?Sized>(cfg: &NoiseConfig, rng: &mut R) -> f64 {
    let sigma = detuning_sigma_hz(cfg);
    if sigma == 0.0 {
        return 0.0;
    }
    Normal::new(0.0, sigma)
        .expect("finite sigma")
        .sample(rng)
}

fn decay_probability(rate: f64, t: f64) -> f64 {
    if rate == 0.0 || t == 0.0 {
        0.0
    } else {
        -(-rate * t).exp_m1()
    }
}

/// Independent amplitude damping `|1> (D) -> |0> (S)` on both ions with
/// probability `1 - e^{-t/T_D}`. Only meaningful in the S-D encoding.
pub fn spontaneous_decay_sd(t: f64, cfg: &NoiseConfig) -> KrausChannel {
    assert!(t >= 0.0, "delay must be non-negative");
    let p = if cfg.d_lifetime_s.is_infinite() {
        0.0
    } else {
        decay_probability(1.0 / cfg.d_lifetime_s, t)
    };
    let k0 = Mat2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c((1.0 - p).sqrt(), 0.0));
    let k1 = Mat2::new(c(0.0, 0.0), c(p.sqrt(), 0.0), c(0.0, 0.0), c(0.0, 0.0));
    let one = KrausChannel::local(1, &[k0, k1]).expect("amplitude damping is trace preserving");
    let two = KrausChannel::local(2, &[k0, k1]).expect("amplitude damping is trace preserving");
    one.then(&two)
}

/// Mean phonon number after `t` seconds of heating.
pub fn heating_nbar(t: f64, cfg: &NoiseConfig) -> f64 {
    assert!(t >= 0.0, "delay must be non-negative");
    cfg.nbar0 + cfg.heating_rate_phonons_per_s * t
}

/// Rotation-angle deficit of a nominal π/2 analysis pulse after `t` seconds
/// of heating, from `Ω(n̄) = Ω0 (1 - η² n̄)`; saturates at π/2 when the
/// modelled Rabi frequency reaches zero.
pub fn analysis_pulse_error(t: f64, cfg: &NoiseConfig) -> f64 {
    let reduction = (cfg.lamb_dicke * cfg.lamb_dicke * heating_nbar(t, cfg)).min(1.0);
    FRAC_PI_2 * reduction
}

/// Per-ion flip probability from residual light scattering.
pub fn scattering_flip_probability(t: f64, cfg: &NoiseConfig) -> f64 {
    decay_probability(cfg.scattering_rate_per_s, t)
}

/// Independent bit flips on each ion with probability `1 - e^{-r t}`.
pub fn bitflip_scattering(t: f64, cfg: &NoiseConfig) -> KrausChannel {
    assert!(t >= 0.0, "delay must be non-negative");
    let p = scattering_flip_probability(t, cfg);
    if p == 0.0 {
        return KrausChannel::identity();
    }
    let ops = [
        linalg::pauli(0) * c((1.0 - p).sqrt(), 0.0),
        linalg::pauli(1) * c(p.sqrt(), 0.0),
    ];
    let one = KrausChannel::local(1, &ops).expect("bit flip is trace preserving");
    let two = KrausChannel::local(2, &ops).expect("bit flip is trace preserving");
    one.then(&two)
}

/// Independent single-ion depolarisation with probability `1 - e^{-r t}`
/// from background-gas collisions.
pub fn collision_depolarizing(t: f64, cfg: &NoiseConfig) -> KrausChannel {
    assert!(t >= 0.0, "delay must be non-negative");
    let p = decay_probability(cfg.collision_rate_per_s, t);
    if p == 0.0 {
        return KrausChannel::identity();
    }
    let ops = [
        linalg::pauli(0) * c((1.0 - 0.75 * p).sqrt(), 0.0),
        linalg::pauli(1) * c((0.25 * p).sqrt(), 0.0),
        linalg::pauli(2) * c((0.25 * p).sqrt(), 0.0),
        linalg::pauli(3) * c((0.25 * p).sqrt(), 0.0),
    ];
    let one = KrausChannel::local(1, &ops).expect("depolarizing is trace preserving");
    let two = KrausChannel::local(2, &ops).expect("depolarizing is trace preserving");
    one.then(&two)
}

/// Incoherent storage losses (scattering then collisions).
pub fn storage_losses(t: f64, cfg: &NoiseConfig) -> KrausChannel {
    bitflip_scattering(t, cfg).then(&collision_depolarizing(t, cfg))
}

/// Ensemble-averaged storage channel in the Zeeman encoding.
pub fn storage_channel(t: f64, cfg: &NoiseConfig) -> KrausChannel {
    deterministic_phase(t, cfg)
        .then(&gaussian_gradient_dephasing(t, cfg))
        .then(&storage_losses(t, cfg))
}

/// Storage channel of a single cycle with a fixed drift `detuning_hz`.
pub fn cycle_channel(t: f64, cfg: &NoiseConfig, detuning_hz: f64) -> KrausChannel {
    let theta = 2.0 * PI * (cfg.gradient_hz + detuning_hz) * t;
    differential_phase(theta).then(&storage_losses(t, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{apply_channel, bell_psi, best_phase, f_min, TwoQubitState};
    use crate::rng::SeedStream;

    fn coh(s: &TwoQubitState) -> C64 {
        s.coherence()
    }

    #[test]
    fn deterministic_phase_half_period() {
        let cfg = NoiseConfig::default();
        let out = apply_channel(&bell_psi(0.0), &deterministic_phase(1.0 / 60.0, &cfg));
        assert!((coh(&out) - c(-0.5, 0.0)).norm() < 1e-12);
        assert!((best_phase(&out).abs() - PI).abs() < 1e-9);
        assert!((f_min(&out) - 1.0).abs() < 1e-12);
        assert_eq!(deterministic_phase(0.0, &cfg), KrausChannel::identity());
    }

    #[test]
    fn deterministic_phase_advances_bell_phase() {
        let out = apply_channel(&bell_psi(0.2), &differential_phase(0.5));
        assert!(out.distance(&bell_psi(0.7)) < 1e-12);
    }

    #[test]
    fn collective_dephasing_limits() {
        let ghz = TwoQubitState::pure([
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
        ])
        .unwrap();
        let zero = apply_channel(&ghz, &collective_dephasing(0.0));
        assert!(zero.distance(&ghz) < 1e-12);
        let strong = apply_channel(&ghz, &collective_dephasing(40.0));
        let m = strong.matrix();
        assert!(m[(0, 3)].norm() < 1e-12);
        assert!((m[(0, 0)].re - 0.5).abs() < 1e-12 && (m[(3, 3)].re - 0.5).abs() < 1e-12);
        let s2 = apply_channel(&ghz, &collective_dephasing(2.0));
        assert!((s2.matrix()[(0, 3)].norm() - 0.5 * (-8.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn collective_dephasing_leaves_dfs() {
        for s in [0.1, 1.0, 3.0, 25.0] {
            for phi in [0.0, 1.3, -2.2] {
                let b = bell_psi(phi);
                assert!(apply_channel(&b, &collective_dephasing(s)).distance(&b) < 1e-12);
            }
        }
    }

    #[test]
    fn gaussian_dephasing_values() {
        let cfg = NoiseConfig::default();
        let b = bell_psi(0.0);
        let at = |t: f64| coh(&apply_channel(&b, &gaussian_gradient_dephasing(t, &cfg))).norm() / 0.5;
        assert!((at(0.0) - 1.0).abs() < 1e-12);
        assert!((at(34.0) - (-1.0f64).exp()).abs() < 1e-12);
        // e^{-(20/34)^2} = 0.70749...
        assert!((at(20.0) - 0.707_497_8).abs() < 1e-6);
        let out = apply_channel(&b, &gaussian_gradient_dephasing(20.0, &cfg));
        assert!((out.population(BasisLabel::B01) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn detuning_sampler_is_unbiased_and_reproducible() {
        let cfg = NoiseConfig::default();
        let s = SeedStream::new(9);
        let mut rng = s.rng(0);
        let n = 100_000;
        let draws: Vec<f64> = (0..n).map(|_| sample_run_detuning(&cfg, &mut rng)).collect();
        let m = crate::stats::mean(&draws);
        let sigma = detuning_sigma_hz(&cfg);
        assert!(m.abs() < 4.0 * sigma / (n as f64).sqrt());
        let mut again = s.rng(0);
        for d in draws.iter().take(10) {
            assert_eq!(*d, sample_run_detuning(&cfg, &mut again));
        }
        // Monte Carlo average of e^{i 2π δ t} at t = τ
        let t = cfg.tau_dephasing_s;
        let avg: f64 = draws.iter().map(|d| (2.0 * PI * d * t).cos()).sum::<f64>() / n as f64;
        assert!((avg - (-1.0f64).exp()).abs() < 5.0 / (n as f64).sqrt());
    }

    #[test]
    fn spontaneous_decay_closed_form() {
        let cfg = NoiseConfig::default();
        let b = bell_psi(0.0);
        let out = apply_channel(&b, &spontaneous_decay_sd(cfg.d_lifetime_s, &cfg));
        assert!((coh(&out).norm() - 0.5 * (-1.0f64).exp()).abs() < 1e-12);
        assert_eq!(spontaneous_decay_sd(0.0, &cfg).apply(&b).distance(&b), 0.0);
        let late = apply_channel(&b, &spontaneous_decay_sd(1e4, &cfg));
        assert!((late.population(BasisLabel::B00) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn heating_values() {
        let mut cfg = NoiseConfig::default();
        assert_eq!(heating_nbar(20.0, &cfg), 20.0);
        assert_eq!(heating_nbar(0.0, &cfg), cfg.nbar0);
        cfg.heating_rate_phonons_per_s = 0.0;
        assert_eq!(heating_nbar(50.0, &cfg), heating_nbar(0.0, &cfg));
    }

    #[test]
    fn pulse_error_monotone() {
        let mut cfg = NoiseConfig::default();
        cfg.lamb_dicke = 0.1;
        assert_eq!(analysis_pulse_error(0.0, &cfg), 0.0);
        let mut last = 0.0;
        for k in 0..400 {
            let e = analysis_pulse_error(k as f64 * 0.5, &cfg);
            assert!(e >= last);
            last = e;
        }
        assert!(last <= FRAC_PI_2);
    }

    #[test]
    fn scattering_probability_bound() {
        let cfg = NoiseConfig::default().with_rate_ceilings();
        // 1 - e^{-20/480} = 0.040811...
        assert!((scattering_flip_probability(20.0, &cfg) - 0.040_811_4).abs() < 1e-6);
        let b = bell_psi(0.4);
        assert_eq!(bitflip_scattering(0.0, &cfg).apply(&b), b);
        let off = NoiseConfig::default();
        assert_eq!(bitflip_scattering(20.0, &off), KrausChannel::identity());
        assert_eq!(collision_depolarizing(20.0, &off), KrausChannel::identity());
    }

    #[test]
    fn built_in_channels_trace_preserving() {
        let cfg = NoiseConfig::default().with_rate_ceilings();
        let chans = [
            deterministic_phase(0.3, &cfg),
            collective_dephasing(1.7),
            gaussian_gradient_dephasing(12.0, &cfg),
            spontaneous_decay_sd(0.8, &cfg),
            bitflip_scattering(30.0, &cfg),
            collision_depolarizing(30.0, &cfg),
            storage_channel(15.0, &cfg),
        ];
        for ch in &chans {
            assert!(ch.tp_deviation() < 1e-12);
        }
    }
}
