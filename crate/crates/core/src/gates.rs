//! Elementary gate schedules, the seven-segment CNOT pipeline, and averaged
//! gate-quality metrics.
//!
//! Rotations are realized by rectangular control pulses on the two-qubit
//! gate Hamiltonian: a z-rotation by α switches ε_n = −ε₀·sign(α) for
//! |α|/(2ε₀), an x-rotation switches J_n likewise for |α|/(2J₀), and the
//! two-qubit XY rotation switches g = −g₀·sign(α) for |α|/g₀. The CNOT is
//! the standard eight-operation sequence, with the two initial z-rotations
//! merged into one simultaneous segment, for a total time
//! π/(2ε₀) + π/J₀ + π/g₀.
//!
//! Noise is a common bath: one shared dephasing field (σ_z^(a)+σ_z^(b), γ₀),
//! one shared bit-flip field (σ_x^(a)+σ_x^(b), γ₁), and fluctuations of the
//! inter-qubit flip-flop coupling (γ₂). Channels stay on during every
//! segment.

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::hamiltonian::flip_flop_operator;
use crate::linalg::{cx, CMat, CVec};
use crate::liouville::{schedule_propagator, ControlSegment, NoiseModel, Propagator};
use crate::noise::FluctuationChannel;
use crate::qubits::{embed, pauli, Pauli, QubitRegister};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QubitId {
    A,
    B,
}

/// An elementary rotation realizable by one rectangular pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateOp {
    /// exp(i(α/2)σ_z) on one qubit.
    Zrot { qubit: QubitId, angle: f64 },
    /// exp(i(α/2)σ_x) on one qubit.
    Xrot { qubit: QubitId, angle: f64 },
    /// exp(iα·(flip-flop)) on the pair.
    XYrot { angle: f64 },
}

/// Magnitudes of the controllable fields ε₀, J₀, g₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldStrengths {
    pub eps0: f64,
    pub j0: f64,
    pub gxy0: f64,
}

impl FieldStrengths {
    pub fn new(eps0: f64, j0: f64, gxy0: f64) -> Result<Self> {
        for (name, v) in [("eps0", eps0), ("j0", j0), ("gxy0", gxy0)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "field strength {name} = {v} must be positive"
                )));
            }
        }
        Ok(Self { eps0, j0, gxy0 })
    }

    pub fn unit() -> Self {
        Self {
            eps0: 1.0,
            j0: 1.0,
            gxy0: 1.0,
        }
    }
}

/// Common-bath noise strengths for the gate model.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GateNoiseSpec {
    /// Diagonal (dephasing) strength γ₀.
    pub g0: f64,
    /// Off-diagonal (bit-flip) strength γ₁.
    pub g1: f64,
    /// Inter-qubit flip-flop strength γ₂.
    pub g2: f64,
}

impl GateNoiseSpec {
    pub fn new(g0: f64, g1: f64, g2: f64) -> Result<Self> {
        for (name, v) in [("gamma0", g0), ("gamma1", g1), ("gamma2", g2)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "noise strength {name} = {v} must be non-negative"
                )));
            }
        }
        Ok(Self { g0, g1, g2 })
    }

    pub fn none() -> Self {
        Self::default()
    }

    /// The three collective channels; zero-strength entries are dropped.
    pub fn channels(&self) -> Result<Vec<FluctuationChannel>> {
        let reg = QubitRegister::new(2)?;
        let za = embed(&pauli(Pauli::Z), 0, reg)?;
        let zb = embed(&pauli(Pauli::Z), 1, reg)?;
        let xa = embed(&pauli(Pauli::X), 0, reg)?;
        let xb = embed(&pauli(Pauli::X), 1, reg)?;
        let mut out = Vec::new();
        if self.g0 != 0.0 {
            out.push(FluctuationChannel::new(za + zb, self.g0, "eps.common")?);
        }
        if self.g1 != 0.0 {
            out.push(FluctuationChannel::new(xa + xb, self.g1, "j.common")?);
        }
        if self.g2 != 0.0 {
            out.push(FluctuationChannel::new(
                flip_flop_operator(),
                self.g2,
                "g.flipflop",
            )?);
        }
        Ok(out)
    }

    pub fn noise_model(&self) -> Result<NoiseModel> {
        Ok(NoiseModel::new(self.channels()?))
    }
}

/// Control segment realizing one elementary rotation.
pub fn elementary_schedule(op: GateOp, strengths: &FieldStrengths) -> Result<ControlSegment> {
    let (angle, field, duration_unit) = match op {
        GateOp::Zrot { angle, .. } => (angle, strengths.eps0, 2.0 * strengths.eps0),
        GateOp::Xrot { angle, .. } => (angle, strengths.j0, 2.0 * strengths.j0),
        GateOp::XYrot { angle } => (angle, strengths.gxy0, strengths.gxy0),
    };
    if angle == 0.0 || !angle.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "rotation angle {angle} must be finite and non-zero"
        )));
    }
    let amplitude = -field * angle.signum();
    let duration = angle.abs() / duration_unit;
    let (mut eps_a, mut eps_b, mut j_a, mut j_b, mut g) = (0.0, 0.0, 0.0, 0.0, 0.0);
    match op {
        GateOp::Zrot { qubit: QubitId::A, .. } => eps_a = amplitude,
        GateOp::Zrot { qubit: QubitId::B, .. } => eps_b = amplitude,
        GateOp::Xrot { qubit: QubitId::A, .. } => j_a = amplitude,
        GateOp::Xrot { qubit: QubitId::B, .. } => j_b = amplitude,
        GateOp::XYrot { .. } => g = amplitude,
    }
    ControlSegment::new(eps_a, eps_b, j_a, j_b, g, duration)
}

/// The seven-segment CNOT schedule (the two leading z-rotations run
/// simultaneously as segment 1).
pub fn cnot_schedule(strengths: &FieldStrengths) -> Result<Vec<ControlSegment>> {
    let e0 = strengths.eps0;
    let j0 = strengths.j0;
    let g0 = strengths.gxy0;
    Ok(vec![
        ControlSegment::new(e0, e0, 0.0, 0.0, 0.0, PI / (4.0 * e0))?,
        ControlSegment::new(0.0, 0.0, 0.0, 0.0, -g0, PI / (2.0 * g0))?,
        ControlSegment::new(0.0, 0.0, j0, 0.0, 0.0, PI / (4.0 * j0))?,
        ControlSegment::new(0.0, 0.0, 0.0, 0.0, g0, PI / (2.0 * g0))?,
        ControlSegment::new(0.0, 0.0, 0.0, j0, 0.0, PI / (2.0 * j0))?,
        ControlSegment::new(0.0, e0, 0.0, 0.0, 0.0, PI / (4.0 * e0))?,
        ControlSegment::new(0.0, 0.0, 0.0, -j0, 0.0, PI / (4.0 * j0))?,
    ])
}

/// Total duration of the CNOT schedule: π/(2ε₀) + π/J₀ + π/g₀.
pub fn cnot_duration(strengths: &FieldStrengths) -> f64 {
    PI / (2.0 * strengths.eps0) + PI / strengths.j0 + PI / strengths.gxy0
}

/// The ideal CNOT with qubit a as control, in the standard basis.
pub fn ideal_cnot() -> CMat {
    let mut u = CMat::zeros(4, 4);
    u[(0, 0)] = cx(1.0, 0.0);
    u[(1, 1)] = cx(1.0, 0.0);
    u[(2, 3)] = cx(1.0, 0.0);
    u[(3, 2)] = cx(1.0, 0.0);
    u
}

/// The 16 unentangled product states |φ_i⟩_a ⊗ |φ_j⟩_b with
/// φ ∈ {|0⟩, |1⟩, (|0⟩+|1⟩)/√2, (|0⟩+i|1⟩)/√2}, i-major order.
pub fn sixteen_input_states() -> Vec<CVec> {
    let s = FRAC_1_SQRT_2;
    let singles = [
        [cx(1.0, 0.0), cx(0.0, 0.0)],
        [cx(0.0, 0.0), cx(1.0, 0.0)],
        [cx(s, 0.0), cx(s, 0.0)],
        [cx(s, 0.0), cx(0.0, s)],
    ];
    let mut out = Vec::with_capacity(16);
    for a in &singles {
        for b in &singles {
            let mut v = CVec::zeros(4);
            for (ia, ca) in a.iter().enumerate() {
                for (ib, cb) in b.iter().enumerate() {
                    v[ia * 2 + ib] = ca * cb;
                }
            }
            out.push(v);
        }
    }
    out
}

/// Averaged gate fidelity, purity, and error over the 16-state input set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateMetrics {
    pub fidelity: f64,
    pub purity: f64,
    pub error: f64,
}

impl GateMetrics {
    fn from_fidelity_purity(fidelity: f64, purity: f64) -> Self {
        Self {
            fidelity,
            purity,
            error: 1.0 - fidelity,
        }
    }
}

/// Propagate the 16 inputs through a noisy schedule and average the overlap
/// with the ideal CNOT outputs (fidelity) and Tr ρ² (purity).
pub fn gate_metrics(schedule: &[ControlSegment], noise: &GateNoiseSpec) -> Result<GateMetrics> {
    let total = schedule_propagator(schedule, &noise.noise_model()?)?;
    gate_metrics_with_propagator(&total)
}

/// Same metrics from a pre-composed schedule propagator.
pub fn gate_metrics_with_propagator(total: &Propagator) -> Result<GateMetrics> {
    gate_metrics_for_inputs(total, &sixteen_input_states())
}

// value-sorted summation, so the average is exactly invariant under
// reordering the input set
fn sorted_sum(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.total_cmp(b));
    values.iter().sum()
}

/// Metrics averaged over an explicit pure-state input set; targets are the
/// ideal CNOT outputs of the same inputs.
pub fn gate_metrics_for_inputs(total: &Propagator, inputs: &[CVec]) -> Result<GateMetrics> {
    if inputs.is_empty() {
        return Err(Error::InvalidParameter("empty input-state set".into()));
    }
    let ideal = ideal_cnot();
    let mut fidelities = Vec::with_capacity(inputs.len());
    let mut purities = Vec::with_capacity(inputs.len());
    for input in inputs {
        let rho0 = DensityMatrix::pure(input)?;
        let rho = total.apply(&rho0)?;
        let target = &ideal * input;
        fidelities.push(rho.expectation(&target));
        purities.push(rho.purity());
    }
    let n = inputs.len() as f64;
    Ok(GateMetrics::from_fidelity_purity(
        sorted_sum(&mut fidelities) / n,
        sorted_sum(&mut purities) / n,
    ))
}

/// CNOT metrics at the given noise strengths and control fields.
pub fn cnot_metrics(noise: &GateNoiseSpec, strengths: &FieldStrengths) -> Result<GateMetrics> {
    gate_metrics(&cnot_schedule(strengths)?, noise)
}

/// A single-γ (or uniform all-γ) axis of the noise-strength sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseAxis {
    Gamma0,
    Gamma1,
    Gamma2,
    /// γ₀ = γ₁ = γ₂ = γ.
    All,
}

impl NoiseAxis {
    pub fn spec(&self, gamma: f64) -> Result<GateNoiseSpec> {
        match self {
            Self::Gamma0 => GateNoiseSpec::new(gamma, 0.0, 0.0),
            Self::Gamma1 => GateNoiseSpec::new(0.0, gamma, 0.0),
            Self::Gamma2 => GateNoiseSpec::new(0.0, 0.0, gamma),
            Self::All => GateNoiseSpec::new(gamma, gamma, gamma),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSweepPoint {
    pub gamma: f64,
    pub metrics: GateMetrics,
}

/// CNOT metrics along one noise axis.
pub fn noise_sweep(
    axis: NoiseAxis,
    grid: &[f64],
    strengths: &FieldStrengths,
) -> Result<Vec<NoiseSweepPoint>> {
    let schedule = cnot_schedule(strengths)?;
    grid.iter()
        .map(|&gamma| {
            Ok(NoiseSweepPoint {
                gamma,
                metrics: gate_metrics(&schedule, &axis.spec(gamma)?)?,
            })
        })
        .collect()
}

/// Which noise types coexist in an additivity comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseCombo {
    G0G1,
    G1G2,
    G0G2,
    All,
}

impl NoiseCombo {
    fn mask(&self) -> [bool; 3] {
        match self {
            Self::G0G1 => [true, true, false],
            Self::G1G2 => [false, true, true],
            Self::G0G2 => [true, false, true],
            Self::All => [true, true, true],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdditivityPoint {
    pub gamma: f64,
    /// E with all selected noise types on at once.
    pub joint_error: f64,
    /// Σ over selected types of E with only that type on.
    pub sum_individual: f64,
}

/// Compare the error of coexisting noise types against the sum of their
/// individual errors over a γ grid.
pub fn additivity_sweep(
    combo: NoiseCombo,
    grid: &[f64],
    strengths: &FieldStrengths,
) -> Result<Vec<AdditivityPoint>> {
    let schedule = cnot_schedule(strengths)?;
    let mask = combo.mask();
    grid.iter()
        .map(|&gamma| {
            let pick = |on: bool| if on { gamma } else { 0.0 };
            let joint = GateNoiseSpec::new(pick(mask[0]), pick(mask[1]), pick(mask[2]))?;
            let joint_error = gate_metrics(&schedule, &joint)?.error;
            let mut sum_individual = 0.0;
            for (i, axis) in [NoiseAxis::Gamma0, NoiseAxis::Gamma1, NoiseAxis::Gamma2]
                .iter()
                .enumerate()
            {
                if mask[i] {
                    sum_individual += gate_metrics(&schedule, &axis.spec(gamma)?)?.error;
                }
            }
            Ok(AdditivityPoint {
                gamma,
                joint_error,
                sum_individual,
            })
        })
        .collect()
}

/// How the flip-flop noise strength γ₂ responds to the coupling magnitude
/// g₀, with base coefficient c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gamma2Model {
    Constant,
    /// c·(1 + g₀)
    Linear,
    /// c·(1 + g₀²)
    Quadratic,
}

impl Gamma2Model {
    pub fn gamma2(&self, c: f64, g0: f64) -> f64 {
        match self {
            Self::Constant => c,
            Self::Linear => c * (1.0 + g0),
            Self::Quadratic => c * (1.0 + g0 * g0),
        }
    }
}

/// Fixed parameters of the coupling-strength sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingSweepBase {
    pub gamma0: f64,
    pub gamma1: f64,
    /// Base coefficient c of the γ₂ model.
    pub gamma2_coeff: f64,
    pub eps0: f64,
    pub j0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingSweepPoint {
    pub g0: f64,
    pub gamma2: f64,
    pub error: f64,
}

/// CNOT error as a function of the inter-qubit coupling magnitude, with γ₂
/// tied to g₀ through the chosen model.
pub fn coupling_sweep(
    g0_grid: &[f64],
    model: Gamma2Model,
    base: &CouplingSweepBase,
) -> Result<Vec<CouplingSweepPoint>> {
    g0_grid
        .iter()
        .map(|&g0| {
            if g0 <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "coupling strength {g0} must be positive"
                )));
            }
            let strengths = FieldStrengths::new(base.eps0, base.j0, g0)?;
            let gamma2 = model.gamma2(base.gamma2_coeff, g0);
            let noise = GateNoiseSpec::new(base.gamma0, base.gamma1, gamma2)?;
            let error = cnot_metrics(&noise, &strengths)?.error;
            Ok(CouplingSweepPoint { g0, gamma2, error })
        })
        .collect()
}

/// Standard-basis populations along the CNOT schedule for one basis-state
/// input.
pub fn time_resolved_run(
    input_index: usize,
    noise: &GateNoiseSpec,
    strengths: &FieldStrengths,
    samples_per_segment: usize,
) -> Result<Vec<(f64, [f64; 4])>> {
    let reg = QubitRegister::new(2)?;
    let rho0 = DensityMatrix::pure(&crate::qubits::basis_state(reg, input_index)?)?;
    let schedule = cnot_schedule(strengths)?;
    let samples = crate::liouville::propagate_schedule(
        &schedule,
        &noise.noise_model()?,
        &rho0,
        samples_per_segment,
    )?;
    Ok(samples
        .into_iter()
        .map(|(t, rho)| {
            (
                t,
                [
                    rho.population(0),
                    rho.population(1),
                    rho.population(2),
                    rho.population(3),
                ],
            )
        })
        .collect())
}
