//! Logical-level pulse engine: Bell preparation, transfer into the Zeeman
//! qubit, and analysis rotations.
//!
//! Imperfections are white-noise admixtures sized to the quoted fidelity
//! losses. The three entangling pulses and the transfer π-pulses are kept in
//! the log as symbolic entries; their logical effect is carried by the
//! `entangle` and `relabel` steps that follow them.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use crate::channels::{analysis_pulse_error, spontaneous_decay_sd, NoiseConfig};
use crate::error::{Error, Result};
use crate::qcore::linalg::{self, c, Mat2, Mat4};
use crate::qcore::{apply_channel, bell_psi, best_phase, fidelity_vs_bell, BasisLabel, TwoQubitState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ion {
    One,
    Two,
}

impl Ion {
    pub fn number(self) -> u8 {
        match self {
            Ion::One => 1,
            Ion::Two => 2,
        }
    }
}

impl TryFrom<u8> for Ion {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Ion::One),
            2 => Ok(Ion::Two),
            other => Err(Error::InvalidIon(other)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PulseKind {
    CarrierSd,
    CarrierZeeman,
}

impl PulseKind {
    fn as_str(self) -> &'static str {
        match self {
            PulseKind::CarrierSd => "carrier_sd",
            PulseKind::CarrierZeeman => "carrier_zeeman",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "carrier_sd" => Ok(PulseKind::CarrierSd),
            "carrier_zeeman" => Ok(PulseKind::CarrierZeeman),
            other => Err(Error::Parse(format!("unknown pulse kind {other:?}"))),
        }
    }
}

/// A resonant pulse on one ion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec {
    ion: Ion,
    theta: f64,
    phase: f64,
    kind: PulseKind,
}

impl PulseSpec {
    pub fn new(ion: u8, theta: f64, phase: f64, kind: PulseKind) -> Result<Self> {
        let ion = Ion::try_from(ion)?;
        if !(0.0..=2.0 * PI).contains(&theta) {
            return Err(Error::InvalidPulse(format!("theta {theta} outside [0, 2π]")));
        }
        if !phase.is_finite() {
            return Err(Error::InvalidPulse("phase must be finite".into()));
        }
        Ok(Self { ion, theta, phase, kind })
    }

    pub fn ion(&self) -> Ion {
        self.ion
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn kind(&self) -> PulseKind {
        self.kind
    }
}

/// `R(θ, φ) = exp(-iθ(cos φ X + sin φ Y)/2)`.
pub fn rotation(theta: f64, phase: f64) -> Mat2 {
    let (s, co) = (theta / 2.0).sin_cos();
    let e_minus = c(phase.cos(), -phase.sin());
    let e_plus = c(phase.cos(), phase.sin());
    // -i sin(θ/2) (cos φ X + sin φ Y) has off-diagonals -i s e^{∓iφ}
    Mat2::new(
        c(co, 0.0),
        c(0.0, -s) * e_minus,
        c(0.0, -s) * e_plus,
        c(co, 0.0),
    )
}

/// Two-ion unitary `R(θ1, φ1) ⊗ R(θ2, φ2)`.
pub fn local_rotations(theta1: f64, phase1: f64, theta2: f64, phase2: f64) -> Mat4 {
    linalg::kron(&rotation(theta1, phase1), &rotation(theta2, phase2))
}

fn conjugate(state: &TwoQubitState, u: &Mat4) -> TwoQubitState {
    let m = u * state.matrix() * u.adjoint();
    TwoQubitState::from_trusted(m)
}

pub fn single_qubit_rotation(state: &TwoQubitState, pulse: &PulseSpec) -> TwoQubitState {
    let r = rotation(pulse.theta, pulse.phase);
    let id = linalg::pauli(0);
    let u = match pulse.ion {
        Ion::One => linalg::kron(&r, &id),
        Ion::Two => linalg::kron(&id, &r),
    };
    conjugate(state, &u)
}

/// Nominal π/2 analysis pulses with phases `phase1`, `phase2`, each short by
/// the heating-induced deficit at delay `t`.
pub fn analysis_rotation(
    state: &TwoQubitState,
    phase1: f64,
    phase2: f64,
    t: f64,
    cfg: &NoiseConfig,
) -> TwoQubitState {
    let theta = FRAC_PI_2 - analysis_pulse_error(t, cfg);
    conjugate(state, &local_rotations(theta, phase1, theta, phase2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    /// `S1/2` as 0 and `D5/2` as 1.
    OpticalSd,
    /// The two Zeeman sublevels of `S1/2`.
    Zeeman,
}

impl Encoding {
    fn as_str(self) -> &'static str {
        match self {
            Encoding::OpticalSd => "optical_sd",
            Encoding::Zeeman => "zeeman",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "optical_sd" => Ok(Encoding::OpticalSd),
            "zeeman" => Ok(Encoding::Zeeman),
            other => Err(Error::Parse(format!("unknown encoding {other:?}"))),
        }
    }
}

/// One logged step. `Symbolic` entries document physical pulses that are not
/// simulated and leave the state unchanged on replay.
#[derive(Debug, Clone, PartialEq)]
pub enum SequenceStep {
    Symbolic {
        stage: String,
        transition: String,
        ion: u8,
        theta: f64,
    },
    Entangle {
        phase: f64,
    },
    WhiteNoise {
        weight: f64,
    },
    Relabel(Encoding),
    Pulse(PulseSpec),
    SpontaneousDecay {
        t_s: f64,
        lifetime_s: f64,
    },
}

impl fmt::Display for SequenceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceStep::Symbolic { stage, transition, ion, theta } => write!(
                f,
                "symbolic stage={stage} transition={transition} ion={ion} theta={theta}"
            ),
            SequenceStep::Entangle { phase } => write!(f, "entangle phase={phase}"),
            SequenceStep::WhiteNoise { weight } => write!(f, "white_noise weight={weight}"),
            SequenceStep::Relabel(e) => write!(f, "relabel encoding={}", e.as_str()),
            SequenceStep::Pulse(p) => write!(
                f,
                "pulse ion={} theta={} phase={} kind={}",
                p.ion.number(),
                p.theta,
                p.phase,
                p.kind.as_str()
            ),
            SequenceStep::SpontaneousDecay { t_s, lifetime_s } => {
                write!(f, "decay_sd t_s={t_s} lifetime_s={lifetime_s}")
            }
        }
    }
}

fn fields(rest: &[&str]) -> Result<std::collections::HashMap<String, String>> {
    rest.iter()
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {kv:?}")))
        })
        .collect()
}

fn take<T: std::str::FromStr>(map: &std::collections::HashMap<String, String>, key: &str) -> Result<T> {
    map.get(key)
        .ok_or_else(|| Error::Parse(format!("missing field {key}")))?
        .parse()
        .map_err(|_| Error::Parse(format!("bad value for {key}")))
}

impl std::str::FromStr for SequenceStep {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let (head, rest) = parts
            .split_first()
            .ok_or_else(|| Error::Parse("empty log line".into()))?;
        let m = fields(rest)?;
        Ok(match *head {
            "symbolic" => SequenceStep::Symbolic {
                stage: take(&m, "stage")?,
                transition: take(&m, "transition")?,
                ion: take(&m, "ion")?,
                theta: take(&m, "theta")?,
            },
            "entangle" => SequenceStep::Entangle { phase: take(&m, "phase")? },
            "white_noise" => SequenceStep::WhiteNoise { weight: take(&m, "weight")? },
            "relabel" => SequenceStep::Relabel(Encoding::parse(&take::<String>(&m, "encoding")?)?),
            "pulse" => {
                let kind = PulseKind::parse(&take::<String>(&m, "kind")?)?;
                SequenceStep::Pulse(PulseSpec::new(
                    take(&m, "ion")?,
                    take(&m, "theta")?,
                    take(&m, "phase")?,
                    kind,
                )?)
            }
            "decay_sd" => SequenceStep::SpontaneousDecay {
                t_s: take(&m, "t_s")?,
                lifetime_s: take(&m, "lifetime_s")?,
            },
            other => return Err(Error::Parse(format!("unknown log step {other:?}"))),
        })
    }
}

/// A state together with the ordered steps that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceResult {
    pub state: TwoQubitState,
    pub encoding: Encoding,
    pub log: Vec<SequenceStep>,
}

impl SequenceResult {
    pub fn ground() -> Self {
        Self {
            state: TwoQubitState::basis(BasisLabel::B00),
            encoding: Encoding::OpticalSd,
            log: Vec::new(),
        }
    }

    fn push(&mut self, step: SequenceStep) -> Result<()> {
        let (state, encoding) = apply_step(&self.state, self.encoding, &step)?;
        self.state = state;
        self.encoding = encoding;
        self.log.push(step);
        Ok(())
    }

    /// Line-oriented log text, one step per line.
    pub fn log_text(&self) -> String {
        self.log.iter().map(|s| format!("{s}\n")).collect()
    }
}

fn apply_step(
    state: &TwoQubitState,
    encoding: Encoding,
    step: &SequenceStep,
) -> Result<(TwoQubitState, Encoding)> {
    Ok(match step {
        SequenceStep::Symbolic { .. } => (state.clone(), encoding),
        SequenceStep::Entangle { phase } => {
            if state != &TwoQubitState::basis(BasisLabel::B00) {
                return Err(Error::Precondition("entangling block expects |00>".into()));
            }
            (bell_psi(*phase), encoding)
        }
        SequenceStep::WhiteNoise { weight } => (state.mix_white(*weight), encoding),
        SequenceStep::Relabel(e) => (state.clone(), *e),
        SequenceStep::Pulse(p) => (single_qubit_rotation(state, p), encoding),
        SequenceStep::SpontaneousDecay { t_s, lifetime_s } => {
            let cfg = NoiseConfig {
                d_lifetime_s: *lifetime_s,
                ..NoiseConfig::default()
            };
            (apply_channel(state, &spontaneous_decay_sd(*t_s, &cfg)), encoding)
        }
    })
}

/// Re-executes a log from `|00>` in the optical encoding.
pub fn replay(log: &[SequenceStep]) -> Result<SequenceResult> {
    let mut r = SequenceResult::ground();
    for step in log {
        r.push(step.clone())?;
    }
    Ok(r)
}

pub fn parse_log(text: &str) -> Result<Vec<SequenceStep>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::parse)
        .collect()
}

/// Entangles the ions into `(|SD> + |DS>)/√2` with a white-noise admixture
/// giving fidelity `prep_fidelity`.
pub fn prepare_bell(cfg: &NoiseConfig) -> Result<SequenceResult> {
    let f = cfg.prep_fidelity;
    if !(0.25..=1.0).contains(&f) {
        return Err(Error::Config(format!(
            "prep_fidelity {f} outside [0.25, 1] reachable by white-noise mixing"
        )));
    }
    let mut r = SequenceResult::ground();
    let symbolic = |transition: &str, ion: u8, theta: f64| SequenceStep::Symbolic {
        stage: "prep".into(),
        transition: transition.into(),
        ion,
        theta,
    };
    r.push(symbolic("bsb", 1, FRAC_PI_2))?;
    r.push(symbolic("carrier", 2, PI))?;
    r.push(symbolic("bsb", 2, PI))?;
    r.push(SequenceStep::Entangle { phase: 0.0 })?;
    r.push(SequenceStep::WhiteNoise {
        weight: white_weight_for(f, 1.0),
    })?;
    Ok(r)
}

/// Weight `w` with `w F_in + (1 - w)/4 = F_out`, clamped to `[0, 1]`.
fn white_weight_for(f_out: f64, f_in: f64) -> f64 {
    if f_out >= f_in {
        return 1.0;
    }
    if f_in - 0.25 <= f64::EPSILON {
        return 0.0;
    }
    ((f_out - 0.25) / (f_in - 0.25)).clamp(0.0, 1.0)
}

/// Holds the optical-qubit state for `t` seconds under D-level decay.
pub fn hold_optical(result: &SequenceResult, t: f64, cfg: &NoiseConfig) -> Result<SequenceResult> {
    if result.encoding != Encoding::OpticalSd {
        return Err(Error::Precondition("spontaneous decay applies to the S-D encoding only".into()));
    }
    let mut r = result.clone();
    r.push(SequenceStep::SpontaneousDecay {
        t_s: t,
        lifetime_s: cfg.d_lifetime_s,
    })?;
    Ok(r)
}

/// Moves the D population of each ion into the Zeeman qubit and applies the
/// transfer loss as a white-noise admixture lowering the best-phase fidelity
/// by `transfer_loss`.
pub fn transfer_to_dfs(result: &SequenceResult, cfg: &NoiseConfig) -> Result<SequenceResult> {
    if result.encoding != Encoding::OpticalSd {
        return Err(Error::Precondition("state is already in the Zeeman encoding".into()));
    }
    let mut r = result.clone();
    for ion in [1u8, 2] {
        r.push(SequenceStep::Symbolic {
            stage: "transfer".into(),
            transition: "carrier_sd".into(),
            ion,
            theta: PI,
        })?;
    }
    r.push(SequenceStep::Relabel(Encoding::Zeeman))?;
    let f_in = fidelity_vs_bell(&r.state, best_phase(&r.state));
    let weight = if cfg.transfer_loss == 0.0 {
        1.0
    } else {
        white_weight_for(f_in - cfg.transfer_loss, f_in)
    };
    r.push(SequenceStep::WhiteNoise { weight })?;
    Ok(r)
}
