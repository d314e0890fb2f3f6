//! Physical process models producing exact outcome probabilities.
//!
//! Four model kinds are supported:
//!
//! - `IdealRx`: conjugation by exp(iπσx/4), noise-free;
//! - `Detuned`: the same nominal process implemented with off-resonant
//!   pulses, which corrupts preparation, evolution and measurement
//!   directions together;
//! - `CorrelatedEnv`: a second qubit prepared in the same state as the
//!   system, coupled through a conditional phase — a preparation-dependent
//!   (non-linear) evolution;
//! - `PulseSequence`: the pulse-level realization of the correlated model,
//!   with dynamical-decoupling π pulses interleaved into the conditional
//!   evolution.
//!
//! Readout confusion and stray-light layers can be stacked on any model;
//! they act on the bright-outcome probability after the Born rule.

use crate::bases::{basis_ket, meas_operator, prep_state, BasesError, BasisLabel, Setting};
use crate::linalg::{kron, partial_trace, CMatrix, LinalgError, Subsystem, C64};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ChannelError {
    #[error("state must be a 2x2 unit-trace Hermitian matrix ({0})")]
    BadState(String),
    #[error("label {0:?} is not a canonical preparation label")]
    NotCanonicalLabel(BasisLabel),
    #[error("pulse count must be a positive multiple of 10, got {0}")]
    BadPulseCount(u32),
    #[error("readout error probabilities must lie in [0, 0.5), got ({0}, {1})")]
    BadReadoutError(f64, f64),
    #[error("stray-light parameters out of range: transfer {0}, mean bright population {1}")]
    BadStrayLight(f64, f64),
    #[error(transparent)]
    Bases(#[from] BasesError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Asymmetric bright/dark detection confusion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReadoutError {
    pub eps_bright: f64,
    pub eps_dark: f64,
}

impl ReadoutError {
    pub fn new(eps_bright: f64, eps_dark: f64) -> Result<Self, ChannelError> {
        let ok = |e: f64| (0.0..0.5).contains(&e);
        if ok(eps_bright) && ok(eps_dark) {
            Ok(ReadoutError { eps_bright, eps_dark })
        } else {
            Err(ChannelError::BadReadoutError(eps_bright, eps_dark))
        }
    }
}

/// Population transfer into non-fluorescing levels, visible as a uniform
/// additive shift of bright probabilities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StrayLight {
    pub transfer: f64,
    pub mean_bright_population: f64,
}

impl StrayLight {
    pub fn new(transfer: f64) -> Result<Self, ChannelError> {
        Self::with_mean_population(transfer, 0.5)
    }

    pub fn with_mean_population(transfer: f64, mean_bright_population: f64) -> Result<Self, ChannelError> {
        if (0.0..1.0).contains(&transfer) && (0.0..=1.0).contains(&mean_bright_population) {
            Ok(StrayLight { transfer, mean_bright_population })
        } else {
            Err(ChannelError::BadStrayLight(transfer, mean_bright_population))
        }
    }
}

/// The process being tomographed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChannelKind {
    IdealRx,
    Detuned,
    CorrelatedEnv,
    PulseSequence { n_pulses: u32 },
}

/// A process model plus optional detection-error layers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelModel {
    pub kind: ChannelKind,
    pub detuning_ratio: f64,
    pub readout: Option<ReadoutError>,
    pub stray: Option<StrayLight>,
}

impl ChannelModel {
    pub fn ideal_rx() -> Self {
        ChannelModel { kind: ChannelKind::IdealRx, detuning_ratio: 0.0, readout: None, stray: None }
    }

    pub fn detuned(ratio: f64) -> Self {
        ChannelModel { kind: ChannelKind::Detuned, detuning_ratio: ratio, readout: None, stray: None }
    }

    pub fn correlated_env() -> Self {
        ChannelModel { kind: ChannelKind::CorrelatedEnv, detuning_ratio: 0.0, readout: None, stray: None }
    }

    pub fn pulse_sequence(ratio: f64, n_pulses: u32) -> Self {
        ChannelModel {
            kind: ChannelKind::PulseSequence { n_pulses },
            detuning_ratio: ratio,
            readout: None,
            stray: None,
        }
    }

    pub fn with_readout(mut self, readout: ReadoutError) -> Self {
        self.readout = Some(readout);
        self
    }

    pub fn with_stray(mut self, stray: StrayLight) -> Self {
        self.stray = Some(stray);
        self
    }

    /// Stable descriptor used in sweep records and CSV output.
    pub fn descriptor(&self) -> String {
        let mut base = match self.kind {
            ChannelKind::IdealRx => "ideal".to_string(),
            ChannelKind::Detuned => format!("detuned({})", self.detuning_ratio),
            ChannelKind::CorrelatedEnv => "correlated".to_string(),
            ChannelKind::PulseSequence { n_pulses } => {
                format!("pulse({},n={})", self.detuning_ratio, n_pulses)
            }
        };
        if let Some(r) = self.readout {
            base.push_str(&format!("+readout({},{})", r.eps_bright, r.eps_dark));
        }
        if let Some(s) = self.stray {
            base.push_str(&format!("+stray({})", s.transfer));
        }
        base
    }
}

fn pauli_x() -> CMatrix {
    CMatrix::from_re_im(2, &[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)])
}

fn pauli_y() -> CMatrix {
    CMatrix::from_re_im(2, &[(0.0, 0.0), (0.0, -1.0), (0.0, 1.0), (0.0, 0.0)])
}

fn pauli_z() -> CMatrix {
    CMatrix::from_re_im(2, &[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (-1.0, 0.0)])
}

/// Pulsed rotation R(θ,φ) = exp[+i θ'/2 (n·σ)] under a detuning δ = ratio·Ω.
///
/// The pulse area stretches to θ' = θ·√(1+ratio²) and the rotation axis,
/// nominally (cos φ, −sin φ, 0), tilts out of the equator with
/// n_z = ratio/√(1+ratio²). At ratio 0 this is the nominal rotation.
pub fn detuned_rotation(theta: f64, phase: f64, ratio: f64) -> CMatrix {
    let f = (1.0 + ratio * ratio).sqrt();
    let theta_eff = theta * f;
    let (nx, ny, nz) = (phase.cos() / f, -phase.sin() / f, ratio / f);
    let gen = pauli_x()
        .scale(C64::new(nx, 0.0))
        .add(&pauli_y().scale(C64::new(ny, 0.0)))
        .and_then(|m| m.add(&pauli_z().scale(C64::new(nz, 0.0))))
        .expect("2x2");
    let half = theta_eff / 2.0;
    CMatrix::identity(2)
        .scale(C64::new(half.cos(), 0.0))
        .add(&gen.scale(C64::new(0.0, half.sin())))
        .expect("2x2")
}

fn check_state(rho: &CMatrix) -> Result<(), ChannelError> {
    if rho.rows() != 2 || rho.cols() != 2 {
        return Err(ChannelError::BadState(format!("{}x{}", rho.rows(), rho.cols())));
    }
    if rho.hermiticity_deviation() > 1e-9 {
        return Err(ChannelError::BadState("not Hermitian".to_string()));
    }
    if (rho.trace().re - 1.0).abs() > 1e-9 {
        return Err(ChannelError::BadState(format!("trace {}", rho.trace().re)));
    }
    Ok(())
}

/// The noise-free process: conjugation by exp(iπσx/4).
pub fn ideal_apply(rho: &CMatrix) -> Result<CMatrix, ChannelError> {
    check_state(rho)?;
    let u = detuned_rotation(std::f64::consts::FRAC_PI_2, 0.0, 0.0);
    Ok(rho.conjugate_by(&u)?)
}

/// exp[i·angle·σz⊗σz], the conditional-phase generator between system and
/// environment.
fn conditional_phase(angle: f64) -> CMatrix {
    let mut u = CMatrix::zeros(4, 4);
    let plus = C64::new(angle.cos(), angle.sin());
    let minus = plus.conj();
    u[(0, 0)] = plus;
    u[(1, 1)] = minus;
    u[(2, 2)] = minus;
    u[(3, 3)] = plus;
    u
}

/// Joint evolution with an environment qubit prepared in the same state as
/// the system, then traced out. Preparation-dependent, hence defined only
/// on the four canonical labels.
pub fn correlated_env_apply(prep: BasisLabel) -> Result<CMatrix, ChannelError> {
    if !prep.is_canonical() {
        return Err(ChannelError::NotCanonicalLabel(prep));
    }
    let rho_s = prep_state(prep, false)?;
    let joint = kron(&rho_s, &rho_s);
    let u = conditional_phase(std::f64::consts::FRAC_PI_4)
        .matmul(&kron(&detuned_rotation(std::f64::consts::FRAC_PI_2, 0.0, 0.0), &CMatrix::identity(2)))?;
    let evolved = joint.conjugate_by(&u)?;
    Ok(partial_trace(&evolved, Subsystem::B)?)
}

/// Choi matrix of a linear channel: Σ_mn |m⟩⟨n| ⊗ E(|m⟩⟨n|), trace 2 for
/// trace-preserving maps. The preparation index is the first tensor factor,
/// matching the reconstruction convention; serves as the analytic oracle
/// for linear-inversion tomography.
pub fn choi_of_linear_channel(apply: impl Fn(&CMatrix) -> CMatrix) -> CMatrix {
    let mut choi = CMatrix::zeros(4, 4);
    for m in 0..2 {
        for n in 0..2 {
            let mut e_mn = CMatrix::zeros(2, 2);
            e_mn[(m, n)] = C64::new(1.0, 0.0);
            choi = choi.add(&kron(&e_mn, &apply(&e_mn))).expect("4x4");
        }
    }
    choi
}

/// Detection confusion on a bright probability:
/// p ↦ p(1−eps_bright) + (1−p)·eps_dark.
pub fn readout_adjust(p_bright: f64, e: &ReadoutError) -> f64 {
    p_bright * (1.0 - e.eps_bright) + (1.0 - p_bright) * e.eps_dark
}

/// Stray-light shift of a bright probability:
/// p ↦ min(1, p + transfer·mean_bright_population).
pub fn stray_adjust(p_bright: f64, s: &StrayLight) -> f64 {
    (p_bright + s.transfer * s.mean_bright_population).min(1.0)
}

/// The ten decoupling-pulse phases of one block, in time order.
const DD_PHASES: [f64; 10] = [
    0.0,
    0.8 * std::f64::consts::PI,
    0.4 * std::f64::consts::PI,
    0.8 * std::f64::consts::PI,
    0.0,
    0.0,
    0.8 * std::f64::consts::PI,
    0.4 * std::f64::consts::PI,
    0.8 * std::f64::consts::PI,
    0.0,
];

/// Laboratory pulse conventions shared by the detuned and pulse-level
/// models. The detuning tilt enters with a negative sign relative to
/// `detuned_rotation` (the field sits below resonance), which is the
/// orientation that reproduces the measured state tables.
fn lab_pulse(theta: f64, phase: f64, ratio: f64) -> CMatrix {
    detuned_rotation(theta, phase, -ratio)
}

/// Preparation pulse for a canonical label: none for |0⟩, a π pulse for
/// |1⟩, and π/2 pulses about the two equatorial axes for |+⟩ and |i⟩.
fn prep_pulse(label: BasisLabel, ratio: f64) -> Result<CMatrix, ChannelError> {
    match label {
        BasisLabel::Z0 => Ok(CMatrix::identity(2)),
        BasisLabel::Z1 => Ok(lab_pulse(std::f64::consts::PI, 0.0, ratio)),
        BasisLabel::X1 => Ok(lab_pulse(std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2, ratio)),
        BasisLabel::Y1 => Ok(lab_pulse(std::f64::consts::FRAC_PI_2, 0.0, ratio)),
        other => Err(ChannelError::NotCanonicalLabel(other)),
    }
}

fn pulsed_prep_state(label: BasisLabel, ratio: f64) -> Result<CMatrix, ChannelError> {
    let pulse = prep_pulse(label, ratio)?;
    let ket0 = basis_ket(BasisLabel::Z0)?;
    Ok(CMatrix::projector(&ket0).conjugate_by(&pulse)?)
}

/// Outcome-1 projector of a measurement setting under corrupted pulses.
///
/// The basis change reuses the preparation pulse of the setting's basis
/// element (the inverse pulse maps that state onto the dark level), so the
/// measured projector is exactly the corrupted prepared state.
fn pulsed_meas_projector(setting: Setting, ratio: f64) -> Result<CMatrix, ChannelError> {
    match setting {
        Setting::Z => Ok(meas_operator(BasisLabel::Z1)),
        Setting::X => pulsed_prep_state(BasisLabel::X1, ratio),
        Setting::Y => pulsed_prep_state(BasisLabel::Y1, ratio),
    }
}

/// Reduced system state after the full pulse-level sequence: preparation
/// pulses on system and environment, a π/2 pulse on the system, then the
/// conditional phase split into segments interleaved with simultaneous
/// decoupling π pulses on both qubits (steps repeat every ten pulses).
/// Conditional segments are exact; detuning corrupts only the single-qubit
/// pulses. At ratio 0 this reproduces `correlated_env_apply`.
pub fn pulse_sequence_apply(
    prep_system: BasisLabel,
    prep_env: BasisLabel,
    ratio: f64,
    n_pulses: u32,
) -> Result<CMatrix, ChannelError> {
    if n_pulses == 0 || !n_pulses.is_multiple_of(10) {
        return Err(ChannelError::BadPulseCount(n_pulses));
    }
    if !prep_system.is_canonical() {
        return Err(ChannelError::NotCanonicalLabel(prep_system));
    }
    if !prep_env.is_canonical() {
        return Err(ChannelError::NotCanonicalLabel(prep_env));
    }
    let blocks = n_pulses / 10;
    // total conditional-phase angle is π/4, spread over n_pulses segments
    // with half-length segments at the block edges
    let full = std::f64::consts::FRAC_PI_4 / n_pulses as f64;
    let half = full / 2.0;

    let rho_s = pulsed_prep_state(prep_system, ratio)?;
    let rho_e = pulsed_prep_state(prep_env, ratio)?;
    let mut rho = kron(&rho_s, &rho_e);

    let u1 = kron(&lab_pulse(std::f64::consts::FRAC_PI_2, 0.0, ratio), &CMatrix::identity(2));
    rho = rho.conjugate_by(&u1)?;

    let u_half = conditional_phase(half);
    let u_full = conditional_phase(full);
    for _ in 0..blocks {
        rho = rho.conjugate_by(&u_half)?;
        for (i, &ph) in DD_PHASES.iter().enumerate() {
            let p = lab_pulse(std::f64::consts::PI, ph, ratio);
            rho = rho.conjugate_by(&kron(&p, &p))?;
            let seg = if i == DD_PHASES.len() - 1 { &u_half } else { &u_full };
            rho = rho.conjugate_by(seg)?;
        }
    }
    Ok(partial_trace(&rho, Subsystem::B)?)
}

/// Output state of the model's bare process (before measurement layers) for
/// a canonical preparation label.
pub fn model_output_state(model: &ChannelModel, prep: BasisLabel) -> Result<CMatrix, ChannelError> {
    if !prep.is_canonical() {
        return Err(ChannelError::NotCanonicalLabel(prep));
    }
    match model.kind {
        ChannelKind::IdealRx => ideal_apply(&prep_state(prep, false)?),
        ChannelKind::Detuned => {
            let rho = pulsed_prep_state(prep, model.detuning_ratio)?;
            let v = lab_pulse(std::f64::consts::FRAC_PI_2, 0.0, model.detuning_ratio);
            Ok(rho.conjugate_by(&v)?)
        }
        ChannelKind::CorrelatedEnv => correlated_env_apply(prep),
        ChannelKind::PulseSequence { n_pulses } => {
            pulse_sequence_apply(prep, prep, model.detuning_ratio, n_pulses)
        }
    }
}

/// Exact probabilities (p0, p1) of the two outcomes of a measurement
/// setting, with outcome 1 the bright side. Readout and stray layers apply
/// to the bright probability, in that order; the result is clamped to
/// [0, 1] and outcome 0 carries the complement.
pub fn outcome_probabilities(
    model: &ChannelModel,
    prep: BasisLabel,
    setting: Setting,
) -> Result<(f64, f64), ChannelError> {
    let rho = model_output_state(model, prep)?;
    let projector = match model.kind {
        ChannelKind::Detuned | ChannelKind::PulseSequence { .. } => {
            pulsed_meas_projector(setting, model.detuning_ratio)?
        }
        _ => meas_operator(BasisLabel { setting, outcome: 1 }),
    };
    let mut p1 = projector.matmul(&rho)?.trace().re;
    p1 = p1.clamp(0.0, 1.0);
    if let Some(r) = &model.readout {
        p1 = readout_adjust(p1, r);
    }
    if let Some(s) = &model.stray {
        p1 = stray_adjust(p1, s);
    }
    p1 = p1.clamp(0.0, 1.0);
    Ok((1.0 - p1, p1))
}
