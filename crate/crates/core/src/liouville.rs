//! Generator assembly and exact propagation over piecewise-constant controls.
//!
//! The averaged equation of motion for the density matrix is
//!
//! ```text
//! dρ̃_{αβ}/dt = −iΣ_j H_{αj} ρ̃_{jβ} + iΣ_j ρ̃_{αj} H_{jβ}
//!              − ½ Σ_{k,l} R_{lk;kβ} ρ̃_{αl}
//!              − ½ Σ_{k,l} R_{lk;kα} ρ̃_{lβ}
//!              + Σ_{k,l} R_{βl;kα} ρ̃_{kl}
//! ```
//!
//! [`Superoperator::build`] assembles this term by term from the correlation
//! tensor; [`dissipator_from_channels`] assembles the same dissipative map
//! through the channel (double-commutator) route and exists as an
//! independent cross-check of the tensor path. Control schedules are
//! piecewise constant, so segment propagators are exact matrix exponentials
//! and compose by multiplication.

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::expm::matrix_exponential;
use crate::hamiltonian::{two_qubit_gate, Hamiltonian};
use crate::linalg::{cx, identity, kron, max_abs, unvec_rowmajor, vec_rowmajor, CMat};
use crate::noise::{CorrelationTensor, FluctuationChannel};
use num_complex::Complex64;

/// Generator of the averaged evolution on row-major vectorized density
/// matrices; units 1/time.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    dim: usize,
    mat: CMat,
}

impl Superoperator {
    /// Assemble the full generator from a Hamiltonian and a correlation
    /// tensor, term by term.
    pub fn build(h0: &Hamiltonian, r: &CorrelationTensor) -> Result<Self> {
        let d = h0.dim();
        if r.dim() != 0 && r.dim() != d {
            return Err(Error::DimensionMismatch(format!(
                "Hamiltonian dimension {d} vs correlation tensor dimension {}",
                r.dim()
            )));
        }
        let h = h0.matrix();
        let mut mat = CMat::zeros(d * d, d * d);
        let idx = |a: usize, b: usize| a * d + b;

        for alpha in 0..d {
            for beta in 0..d {
                let row = idx(alpha, beta);
                // coherent part: −i H ρ + i ρ H
                for j in 0..d {
                    mat[(row, idx(j, beta))] -= Complex64::i() * h[(alpha, j)];
                    mat[(row, idx(alpha, j))] += Complex64::i() * h[(j, beta)];
                }
                if r.dim() == 0 {
                    continue;
                }
                // −½ Σ_{k,l} R_{lk;kβ} ρ_{αl}
                for l in 0..d {
                    let mut s = 0.0;
                    for k in 0..d {
                        s += r.get(l, k, k, beta);
                    }
                    mat[(row, idx(alpha, l))] += cx(-0.5 * s, 0.0);
                }
                // −½ Σ_{k,l} R_{lk;kα} ρ_{lβ}
                for l in 0..d {
                    let mut s = 0.0;
                    for k in 0..d {
                        s += r.get(l, k, k, alpha);
                    }
                    mat[(row, idx(l, beta))] += cx(-0.5 * s, 0.0);
                }
                // +Σ_{k,l} R_{βl;kα} ρ_{kl}
                for k in 0..d {
                    for l in 0..d {
                        let v = r.get(beta, l, k, alpha);
                        if v != 0.0 {
                            mat[(row, idx(k, l))] += cx(v, 0.0);
                        }
                    }
                }
            }
        }
        Ok(Self { dim: d, mat })
    }

    pub fn from_matrix(dim: usize, mat: CMat) -> Result<Self> {
        if mat.nrows() != dim * dim || mat.ncols() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "superoperator for dimension {dim} must be {0}x{0}",
                dim * dim
            )));
        }
        Ok(Self { dim, mat })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    /// L(ρ) as a matrix.
    pub fn apply(&self, rho: &CMat) -> CMat {
        unvec_rowmajor(&(&self.mat * vec_rowmajor(rho)), self.dim)
    }

    /// max |(vᵀL)_j| for v = vec(I): zero iff the generator preserves trace.
    pub fn trace_preservation_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for col in 0..d * d {
            let mut s = cx(0.0, 0.0);
            for a in 0..d {
                s += self.mat[(a * d + a, col)];
            }
            worst = worst.max(s.norm());
        }
        worst
    }

    /// ‖L(vec(I/d))‖_max: zero iff the maximally mixed state is a fixed
    /// point.
    pub fn mixed_state_defect(&self) -> f64 {
        let d = self.dim;
        max_abs(&self.apply(&identity(d).scale(1.0 / d as f64)))
    }
}

/// The coherent part −i[H, ·] alone, as a superoperator.
pub fn hamiltonian_superoperator(h0: &Hamiltonian) -> Superoperator {
    let d = h0.dim();
    let h = h0.matrix();
    let eye = identity(d);
    let mat = (kron(h, &eye) - kron(&eye, &h.transpose())).map(|z| -Complex64::i() * z);
    Superoperator { dim: d, mat }
}

/// The dissipative map assembled directly from channels:
/// Σ_m γ_m (A_m ρ A_m − ½{A_m², ρ}). Independent of the tensor route.
pub fn dissipator_from_channels(channels: &[FluctuationChannel]) -> Result<Superoperator> {
    let dim = match channels.first() {
        None => {
            return Err(Error::InvalidParameter(
                "dissipator needs at least one channel".into(),
            ))
        }
        Some(c) => c.dim(),
    };
    let eye = identity(dim);
    let mut mat = CMat::zeros(dim * dim, dim * dim);
    for c in channels {
        if c.dim() != dim {
            return Err(Error::DimensionMismatch(format!(
                "channel '{}' dimension {} vs {}",
                c.bath_label(),
                c.dim(),
                dim
            )));
        }
        let a = c.operator();
        let a2 = a * a;
        let term = kron(a, &a.transpose())
            - kron(&a2, &eye).scale(0.5)
            - kron(&eye, &a2.transpose()).scale(0.5);
        mat += term.scale(c.strength());
    }
    Ok(Superoperator { dim, mat })
}

/// exp(L·τ) over one constant-control stretch.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagator {
    dim: usize,
    mat: CMat,
    duration: f64,
}

impl Propagator {
    pub fn new(l: &Superoperator, duration: f64) -> Result<Self> {
        if !duration.is_finite() || duration < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "propagator duration {duration} must be finite and non-negative"
            )));
        }
        let mat = matrix_exponential(l.matrix(), duration)?;
        Ok(Self {
            dim: l.dim(),
            mat,
            duration,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            mat: identity(dim * dim),
            duration: 0.0,
        }
    }

    /// Wrap an externally assembled map (dim²×dim²) as a propagator.
    pub fn from_matrix(dim: usize, mat: CMat, duration: f64) -> Result<Self> {
        if mat.nrows() != dim * dim || mat.ncols() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "propagator for dimension {dim} must be {0}x{0}",
                dim * dim
            )));
        }
        Ok(Self { dim, mat, duration })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    /// `self` applied after `earlier`: matrix product self·earlier.
    pub fn compose_after(&self, earlier: &Propagator) -> Result<Propagator> {
        if self.dim != earlier.dim {
            return Err(Error::DimensionMismatch(
                "propagator dimensions differ".into(),
            ));
        }
        Ok(Propagator {
            dim: self.dim,
            mat: &self.mat * &earlier.mat,
            duration: self.duration + earlier.duration,
        })
    }

    /// Advance a raw matrix without density validation.
    pub fn apply_matrix(&self, rho: &CMat) -> CMat {
        unvec_rowmajor(&(&self.mat * vec_rowmajor(rho)), self.dim)
    }

    /// Advance a state and re-validate the result.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        DensityMatrix::with_tol(self.apply_matrix(rho.matrix()), rho.tol())
    }
}

/// One piecewise-constant stretch of the two-qubit control fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlSegment {
    pub eps_a: f64,
    pub eps_b: f64,
    pub j_a: f64,
    pub j_b: f64,
    pub g: f64,
    pub duration: f64,
}

impl ControlSegment {
    pub fn new(eps_a: f64, eps_b: f64, j_a: f64, j_b: f64, g: f64, duration: f64) -> Result<Self> {
        let seg = Self {
            eps_a,
            eps_b,
            j_a,
            j_b,
            g,
            duration,
        };
        seg.validate()?;
        Ok(seg)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("eps_a", self.eps_a),
            ("eps_b", self.eps_b),
            ("j_a", self.j_a),
            ("j_b", self.j_b),
            ("g", self.g),
            ("duration", self.duration),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "segment field {name} is not finite"
                )));
            }
        }
        if self.duration <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "segment duration {} must be positive",
                self.duration
            )));
        }
        Ok(())
    }

    pub fn hamiltonian(&self) -> Result<Hamiltonian> {
        two_qubit_gate(self.eps_a, self.eps_b, self.j_a, self.j_b, self.g)
    }
}

/// The noise side of a scenario: a fixed set of channels that stay on across
/// every segment of a schedule.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NoiseModel {
    channels: Vec<FluctuationChannel>,
}

impl NoiseModel {
    pub fn new(channels: Vec<FluctuationChannel>) -> Self {
        Self { channels }
    }

    pub fn none() -> Self {
        Self::default()
    }

    pub fn channels(&self) -> &[FluctuationChannel] {
        &self.channels
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    /// Σ_m γ_m.
    pub fn total_strength(&self) -> f64 {
        self.channels.iter().map(|c| c.strength()).sum()
    }

    pub fn correlation_tensor(&self, dim: usize) -> Result<CorrelationTensor> {
        if self.channels.is_empty() {
            return Ok(CorrelationTensor::zero(dim));
        }
        CorrelationTensor::from_channels(&self.channels)
    }
}

/// exp(L·t) applied to ρ₀, with the output re-validated as a density
/// matrix. t = 0 returns ρ₀ unchanged.
pub fn propagate_fixed(l: &Superoperator, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "propagation time {t} must be finite and non-negative"
        )));
    }
    if l.dim() != rho0.dim() {
        return Err(Error::DimensionMismatch(format!(
            "superoperator dimension {} vs state dimension {}",
            l.dim(),
            rho0.dim()
        )));
    }
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    Propagator::new(l, t)?.apply(rho0)
}

fn segment_superoperator(segment: &ControlSegment, noise: &NoiseModel) -> Result<Superoperator> {
    let h0 = segment.hamiltonian()?;
    let r = noise.correlation_tensor(h0.dim())?;
    Superoperator::build(&h0, &r)
}

/// Single propagator for a whole schedule: the product of the per-segment
/// exponentials, rightmost segment first.
pub fn schedule_propagator(segments: &[ControlSegment], noise: &NoiseModel) -> Result<Propagator> {
    if segments.is_empty() {
        return Err(Error::InvalidParameter("empty schedule".into()));
    }
    let mut total: Option<Propagator> = None;
    for seg in segments {
        seg.validate()?;
        let p = Propagator::new(&segment_superoperator(seg, noise)?, seg.duration)?;
        total = Some(match total {
            None => p,
            Some(acc) => p.compose_after(&acc)?,
        });
    }
    Ok(total.expect("schedule is nonempty"))
}

/// Propagate through a schedule, emitting `samples_per_segment` uniformly
/// spaced states inside every segment (plus the initial state at t = 0).
pub fn propagate_schedule(
    segments: &[ControlSegment],
    noise: &NoiseModel,
    rho0: &DensityMatrix,
    samples_per_segment: usize,
) -> Result<Vec<(f64, DensityMatrix)>> {
    if segments.is_empty() {
        return Err(Error::InvalidParameter("empty schedule".into()));
    }
    if samples_per_segment == 0 {
        return Err(Error::InvalidParameter(
            "samples_per_segment must be at least 1".into(),
        ));
    }
    let mut out = Vec::with_capacity(1 + segments.len() * samples_per_segment);
    out.push((0.0, rho0.clone()));
    let mut t_start = 0.0;
    let mut current = rho0.clone();
    for seg in segments {
        seg.validate()?;
        let l = segment_superoperator(seg, noise)?;
        let step = Propagator::new(&l, seg.duration / samples_per_segment as f64)?;
        for k in 1..=samples_per_segment {
            current = step.apply(&current)?;
            out.push((t_start + seg.duration * k as f64 / samples_per_segment as f64, current.clone()));
        }
        t_start += seg.duration;
    }
    Ok(out)
}
