//! The storage-delay experiment: preparation, transfer, a delay with
//! per-cycle drift, and an `F_min` estimate with bootstrap errors.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::scenario::{EstimationMode, PhaseMode, Scenario};
use crate::channels::{analysis_pulse_error, cycle_channel, gradient_phase, sample_run_detuning, storage_channel, NoiseConfig};
use crate::error::{Error, Result};
use crate::qcore::linalg::Mat4;
use crate::qcore::{best_phase, f_min, fidelity_vs_bell, wrap_phase, TwoQubitState};
use crate::rng::SeedStream;
use crate::sequence::{prepare_bell, transfer_to_dfs};
use crate::stats;
use crate::tomo::{
    analysis_unitary, default_phase_grid, fit_fringe, mle_reconstruct, mle_reconstruct_data, outcome_probabilities, parity,
    simulate_tomography, FringePhase, MeasurementRecord, MeasurementSetting, OutcomeCounts, Readout, TomographyData,
    BOOTSTRAP_RESAMPLES,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub t_s: f64,
    pub fmin: f64,
    pub stderr: f64,
}

/// A delay whose estimate could not be produced.
#[derive(Debug, Clone, PartialEq)]
pub struct PointFailure {
    pub t_s: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DecayCurve {
    pub rows: Vec<DecayRow>,
    pub failures: Vec<PointFailure>,
}

impl DecayCurve {
    pub fn new(rows: Vec<DecayRow>) -> Result<Self> {
        let c = Self {
            rows,
            failures: Vec::new(),
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        for r in &self.rows {
            if !(r.t_s.is_finite() && r.t_s >= 0.0 && r.fmin.is_finite() && r.stderr.is_finite() && r.stderr >= 0.0) {
                return Err(Error::Precondition(format!("invalid decay row {r:?}")));
            }
        }
        if self.rows.windows(2).any(|w| w[1].t_s < w[0].t_s) {
            return Err(Error::Precondition("decay rows are not sorted by time".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.t_s).collect()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|r| DecayRow {
                t_s: r.t_s,
                fmin: r.fmin * factor,
                stderr: r.stderr * factor.abs(),
            })
            .collect();
        Self {
            rows,
            failures: self.failures.clone(),
        }
    }

    /// Largest delay whose two-sigma lower bound stays above 1/2.
    pub fn entangled_until_s(&self) -> Option<f64> {
        self.rows
            .iter()
            .filter(|r| r.fmin - 2.0 * r.stderr > 0.5)
            .map(|r| r.t_s)
            .reduce(f64::max)
    }
}

/// Prepared and transferred Bell state, the start of every storage cycle.
pub fn transferred_state(cfg: &NoiseConfig) -> Result<TwoQubitState> {
    Ok(transfer_to_dfs(&prepare_bell(cfg)?, cfg)?.state)
}

/// Ensemble-averaged state after storing the transferred state for `t`.
pub fn state_after_delay(cfg: &NoiseConfig, t: f64) -> Result<TwoQubitState> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Precondition(format!("delay must be >= 0, got {t}")));
    }
    Ok(storage_channel(t, cfg).apply(&transferred_state(cfg)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TomographySnapshot {
    pub truth: TwoQubitState,
    pub estimate: TwoQubitState,
    pub records: Vec<MeasurementRecord>,
    /// Fidelity of the estimate with the Bell state at its own best phase.
    pub fidelity: f64,
    pub fmin: f64,
    pub iterations: usize,
}

/// Full tomography of the stored state after `t` seconds.
pub fn tomography_after_delay(cfg: &NoiseConfig, t: f64, shots_per_setting: u64, seed: u64) -> Result<TomographySnapshot> {
    cfg.validate()?;
    if shots_per_setting == 0 {
        return Err(Error::ZeroShots("tomography".into()));
    }
    let truth = state_after_delay(cfg, t)?;
    let readout = Readout {
        pulse_deficit: analysis_pulse_error(t, cfg),
        flip_probability: cfg.readout_error,
    };
    let records = simulate_tomography(&truth, shots_per_setting, readout, &mut SeedStream::new(seed).rng(0));
    let mle = mle_reconstruct(&records)?;
    let estimate = mle.state;
    Ok(TomographySnapshot {
        fidelity: fidelity_vs_bell(&estimate, best_phase(&estimate)),
        fmin: f_min(&estimate),
        truth,
        estimate,
        records,
        iterations: mle.iterations,
    })
}

/// What a single delay point measures: the analysis unitaries and how the
/// aggregated counts turn into an `F_min` estimate.
struct PointPlan {
    unitaries: Vec<Mat4>,
    phases: Vec<f64>,
    fringe: FringePhase,
    mode: EstimationMode,
}

impl PointPlan {
    fn new(sc: &Scenario, initial: &TwoQubitState, t: f64) -> Self {
        let deficit = analysis_pulse_error(t, &sc.noise);
        match sc.mode {
            EstimationMode::ParityFmin => {
                let phases = default_phase_grid(sc.phase_points);
                let fringe = match sc.phase_mode {
                    PhaseMode::Free => FringePhase::Free,
                    PhaseMode::Gradient => {
                        FringePhase::Fixed(wrap_phase(best_phase(initial) + gradient_phase(t, &sc.noise)))
                    }
                };
                Self {
                    unitaries: phases.iter().map(|&d| analysis_unitary(d, deficit)).collect(),
                    phases,
                    fringe,
                    mode: sc.mode,
                }
            }
            EstimationMode::FullTomography => Self {
                unitaries: MeasurementSetting::all().iter().map(|s| s.unitary(deficit)).collect(),
                phases: Vec::new(),
                fringe: FringePhase::Free,
                mode: sc.mode,
            },
        }
    }

    fn estimate(&self, counts: &[OutcomeCounts]) -> Result<f64> {
        match self.mode {
            EstimationMode::ParityFmin => {
                let parities: Vec<f64> = counts.iter().map(parity).collect();
                Ok(fit_fringe(&self.phases, &parities, self.fringe)?.contrast)
            }
            EstimationMode::FullTomography => {
                let records: Vec<MeasurementRecord> = MeasurementSetting::all()
                    .iter()
                    .zip(counts)
                    .map(|(s, c)| MeasurementRecord {
                        setting: *s,
                        counts: *c,
                    })
                    .collect();
                let data = TomographyData::from_records(&records)?;
                Ok(f_min(&mle_reconstruct_data(&data)?.state))
            }
        }
    }
}

fn sum_counts(per_cycle: &[Vec<OutcomeCounts>], picks: impl Iterator<Item = usize>, width: usize) -> Vec<OutcomeCounts> {
    let mut total = vec![OutcomeCounts::default(); width];
    for k in picks {
        for (acc, c) in total.iter_mut().zip(&per_cycle[k]) {
            acc.add(c);
        }
    }
    total
}

fn estimate_point(sc: &Scenario, initial: &TwoQubitState, t: f64, stream: SeedStream) -> Result<DecayRow> {
    let cfg = &sc.noise;
    let plan = PointPlan::new(sc, initial, t);
    let mut drift = stream.rng(0);
    let mut shots = stream.rng(1);
    let per_cycle: Vec<Vec<OutcomeCounts>> = (0..sc.cycles_per_point)
        .map(|_| {
            let detuning = sample_run_detuning(cfg, &mut drift);
            let state = cycle_channel(t, cfg, detuning).apply(initial);
            plan.unitaries
                .iter()
                .map(|u| {
                    let p = outcome_probabilities(&state, u, cfg.readout_error);
                    OutcomeCounts(stats::multinomial(&mut shots, sc.shots_per_setting, &p))
                })
                .collect()
        })
        .collect();

    let width = plan.unitaries.len();
    let fmin = plan.estimate(&sum_counts(&per_cycle, 0..sc.cycles_per_point, width))?;
    let resampled: Vec<f64> = (0..BOOTSTRAP_RESAMPLES as u64)
        .into_par_iter()
        .map(|r| {
            let picks = stats::resample_indices(&mut stream.rng(100 + r), sc.cycles_per_point);
            plan.estimate(&sum_counts(&per_cycle, picks.into_iter(), width))
        })
        .collect::<Result<_>>()?;
    let stderr = stats::std_dev(&resampled);
    if fmin < -3.0 * stderr || fmin > 1.0 + 3.0 * stderr {
        return Err(Error::FitFailed(format!("estimate {fmin} outside [0, 1] by more than 3 sigma")));
    }
    Ok(DecayRow { t_s: t, fmin, stderr })
}

/// Runs every delay of the scenario. A delay whose estimate fails is
/// recorded in `failures` and left out of `rows`.
pub fn run_decay_experiment(sc: &Scenario) -> Result<DecayCurve> {
    sc.validate()?;
    let initial = transferred_state(&sc.noise)?;
    let root = SeedStream::new(sc.seed);
    let results: Vec<Result<DecayRow>> = sc
        .delays_s
        .par_iter()
        .enumerate()
        .map(|(i, &t)| estimate_point(sc, &initial, t, root.child(i as u64)))
        .collect();
    let mut curve = DecayCurve::default();
    for (&t, r) in sc.delays_s.iter().zip(results) {
        match r {
            Ok(row) => curve.rows.push(row),
            Err(e) => curve.failures.push(PointFailure {
                t_s: t,
                reason: e.to_string(),
            }),
        }
    }
    Ok(curve)
}
