//! Density-matrix simulator for qubit registers whose Hamiltonian matrix
//! elements fluctuate as Gaussian white noise.
//!
//! Averaging the stochastic Liouville equation over the fluctuations yields a
//! Redfield-like master equation whose relaxation part is fixed by the second
//! moments of the fluctuating matrix elements (the correlation tensor `R`).
//! This crate assembles that generator as a superoperator, exponentiates it
//! over piecewise-constant control segments, and provides two scenario suites
//! on top: degradation of entangled pairs / teleportation over noisy channels,
//! and a seven-segment CNOT pipeline with averaged gate-quality metrics.
//!
//! A brute-force Monte Carlo trajectory integrator ([`trajectory`]) samples
//! the raw fluctuating Hamiltonian directly and is used to validate the
//! master-equation path against an independent oracle.

pub mod density;
pub mod error;
pub mod expm;
pub mod gates;
pub mod hamiltonian;
pub mod linalg;
pub mod liouville;
pub mod noise;
pub mod qubits;
pub mod teleport;
pub mod trajectory;

pub use density::{check_density, DensityDiagnostics, DensityMatrix};
pub use error::{Error, Result};
pub use expm::{expm, matrix_exponential};
pub use gates::{
    additivity_sweep, cnot_duration, cnot_metrics, cnot_schedule, coupling_sweep,
    elementary_schedule, gate_metrics, gate_metrics_for_inputs, gate_metrics_with_propagator,
    ideal_cnot, noise_sweep, sixteen_input_states, time_resolved_run, AdditivityPoint,
    CouplingSweepBase, CouplingSweepPoint, FieldStrengths, Gamma2Model, GateMetrics,
    GateNoiseSpec, GateOp, NoiseAxis, NoiseCombo, NoiseSweepPoint, QubitId,
};
pub use hamiltonian::{epr_pair, flip_flop_operator, two_qubit_gate, Hamiltonian};
pub use linalg::{CMat, CVec};
pub use liouville::{
    dissipator_from_channels, hamiltonian_superoperator, propagate_fixed, propagate_schedule,
    schedule_propagator, ControlSegment, NoiseModel, Propagator, Superoperator,
};
pub use noise::{CorrelationTensor, FluctuationChannel};
pub use qubits::{basis_state, bell_state, bell_transform, embed, pauli, Pauli, QubitRegister};
pub use teleport::{
    bell_fidelity_trace, bell_populations_closed_form, collective_bath_populations,
    collective_bath_propagator, critical_time, entanglement_fidelity, teleport,
    teleportation_fidelity, Basis, BellIndex, BellWeights, EprBath, EprModel, PureQubitState,
};
pub use trajectory::{
    monte_carlo_average, monte_carlo_observables, sample_trajectory, MonteCarloRun, Observable,
    ObservableRun, TrajectoryConfig,
};
