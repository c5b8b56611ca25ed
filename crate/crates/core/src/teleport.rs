//! Degradation of an entangled pair in noisy channels and the resulting
//! teleportation outcome.
//!
//! The pair Hamiltonian is ε_n σ_z + J_n σ_x per qubit. With ε = J = 0 the
//! Bell-basis populations obey a four-state kinetic system with total rates
//! Γ₀ = γ₀ᵃ+γ₀ᵇ (dephasing) and Γ₁ = γ₁ᵃ+γ₁ᵇ (population transfer), whose
//! closed-form solution from |B₁⟩ is implemented here together with the
//! entanglement fidelity, the critical time where it crosses ½, the
//! Pauli-mixture teleportation map, and the collective-bath kinetics with
//! their invariant states.

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::expm::matrix_exponential;
use crate::hamiltonian::{epr_pair, Hamiltonian};
use crate::linalg::{cx, CMat, CVec};
use crate::liouville::{NoiseModel, Propagator, Superoperator};
use crate::noise::{CorrelationTensor, FluctuationChannel};
use crate::qubits::{bell_state, bell_transform, embed, pauli, Pauli, QubitRegister};
use num_complex::Complex64;

/// Which basis a pair model is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Standard,
    Bell,
}

/// One of the four Bell states (1-based labels B₁..B₄).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellIndex {
    B1,
    B2,
    B3,
    B4,
}

impl BellIndex {
    pub fn from_label(i: usize) -> Result<Self> {
        match i {
            1 => Ok(Self::B1),
            2 => Ok(Self::B2),
            3 => Ok(Self::B3),
            4 => Ok(Self::B4),
            _ => Err(Error::IndexOutOfRange(format!("Bell label {i}"))),
        }
    }

    /// 0-based position in the Bell basis.
    pub fn index(self) -> usize {
        match self {
            Self::B1 => 0,
            Self::B2 => 1,
            Self::B3 => 2,
            Self::B4 => 3,
        }
    }

    pub fn state(self) -> CVec {
        bell_state(self.index() + 1).expect("Bell index in range")
    }
}

/// Bath topology of the pair: each qubit coupled to its own bath, or both
/// coupled to one common field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EprBath {
    Independent {
        g0a: f64,
        g0b: f64,
        g1a: f64,
        g1b: f64,
    },
    Collective {
        g0: f64,
        g1: f64,
    },
}

/// The two-qubit entangled-pair model: averaged fields plus bath spec.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EprModel {
    pub eps_a: f64,
    pub eps_b: f64,
    pub j_a: f64,
    pub j_b: f64,
    pub bath: EprBath,
}

impl EprModel {
    /// Degenerate, uncoupled qubits with independent baths.
    pub fn degenerate_independent(g0a: f64, g0b: f64, g1a: f64, g1b: f64) -> Self {
        Self {
            eps_a: 0.0,
            eps_b: 0.0,
            j_a: 0.0,
            j_b: 0.0,
            bath: EprBath::Independent { g0a, g0b, g1a, g1b },
        }
    }

    pub fn degenerate_collective(g0: f64, g1: f64) -> Self {
        Self {
            eps_a: 0.0,
            eps_b: 0.0,
            j_a: 0.0,
            j_b: 0.0,
            bath: EprBath::Collective { g0, g1 },
        }
    }

    /// Fluctuation channels in the standard basis.
    pub fn channels(&self) -> Result<Vec<FluctuationChannel>> {
        let reg = QubitRegister::new(2)?;
        let za = embed(&pauli(Pauli::Z), 0, reg)?;
        let zb = embed(&pauli(Pauli::Z), 1, reg)?;
        let xa = embed(&pauli(Pauli::X), 0, reg)?;
        let xb = embed(&pauli(Pauli::X), 1, reg)?;
        let mut out = Vec::new();
        match self.bath {
            EprBath::Independent { g0a, g0b, g1a, g1b } => {
                for (op, s, label) in [
                    (za, g0a, "eps_a"),
                    (zb, g0b, "eps_b"),
                    (xa, g1a, "j_a"),
                    (xb, g1b, "j_b"),
                ] {
                    if s != 0.0 {
                        out.push(FluctuationChannel::new(op, s, label)?);
                    }
                }
            }
            EprBath::Collective { g0, g1 } => {
                if g0 != 0.0 {
                    out.push(FluctuationChannel::new(za + zb, g0, "eps.common")?);
                }
                if g1 != 0.0 {
                    out.push(FluctuationChannel::new(xa + xb, g1, "j.common")?);
                }
            }
        }
        Ok(out)
    }

    /// H₀ and R in the requested basis.
    pub fn build(&self, basis: Basis) -> Result<(Hamiltonian, CorrelationTensor)> {
        let h_std = epr_pair(self.eps_a, self.eps_b, self.j_a, self.j_b)?;
        let channels_std = self.channels()?;
        let (h, channels) = match basis {
            Basis::Standard => (h_std, channels_std),
            Basis::Bell => {
                let u = bell_transform();
                let h = h_std.conjugated(&u)?;
                let channels = channels_std
                    .iter()
                    .map(|c| c.conjugated(&u))
                    .collect::<Result<Vec<_>>>()?;
                (h, channels)
            }
        };
        let r = if channels.is_empty() {
            CorrelationTensor::zero(4)
        } else {
            CorrelationTensor::from_channels(&channels)?
        };
        Ok((h, r))
    }

    pub fn noise_model(&self, basis: Basis) -> Result<NoiseModel> {
        let channels = self.channels()?;
        Ok(match basis {
            Basis::Standard => NoiseModel::new(channels),
            Basis::Bell => {
                let u = bell_transform();
                NoiseModel::new(
                    channels
                        .iter()
                        .map(|c| c.conjugated(&u))
                        .collect::<Result<Vec<_>>>()?,
                )
            }
        })
    }
}

/// A normalized single-qubit pure state c₀|0⟩ + c₁|1⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureQubitState {
    c0: Complex64,
    c1: Complex64,
}

impl PureQubitState {
    pub fn new(c0: Complex64, c1: Complex64) -> Result<Self> {
        let norm2 = c0.norm_sqr() + c1.norm_sqr();
        if (norm2 - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "qubit state norm² = {norm2}, must be 1"
            )));
        }
        Ok(Self { c0, c1 })
    }

    /// Normalize arbitrary (non-zero) amplitudes.
    pub fn normalized(c0: Complex64, c1: Complex64) -> Result<Self> {
        let norm = (c0.norm_sqr() + c1.norm_sqr()).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParameter(
                "cannot normalize the zero state".into(),
            ));
        }
        Self::new(c0 / norm, c1 / norm)
    }

    pub fn c0(&self) -> Complex64 {
        self.c0
    }

    pub fn c1(&self) -> Complex64 {
        self.c1
    }

    pub fn ket(&self) -> CVec {
        CVec::from_vec(vec![self.c0, self.c1])
    }
}

/// A statistical mixture over the four Bell states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellWeights {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
}

impl BellWeights {
    pub fn new(p1: f64, p2: f64, p3: f64, p4: f64) -> Result<Self> {
        for (name, p) in [("p1", p1), ("p2", p2), ("p3", p3), ("p4", p4)] {
            if !p.is_finite() || p < -1e-12 {
                return Err(Error::InvalidParameter(format!(
                    "Bell weight {name} = {p} must be non-negative"
                )));
            }
        }
        let sum = p1 + p2 + p3 + p4;
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "Bell weights sum to {sum}, must be 1"
            )));
        }
        Ok(Self { p1, p2, p3, p4 })
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.p1, self.p2, self.p3, self.p4]
    }
}

fn check_rates(g0: f64, g1: f64, t: f64) -> Result<()> {
    if !(g0.is_finite() && g1.is_finite() && t.is_finite()) || g0 < 0.0 || g1 < 0.0 || t < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "rates and time must be finite and non-negative (Γ₀={g0}, Γ₁={g1}, t={t})"
        )));
    }
    Ok(())
}

/// Closed-form Bell populations for a pair starting in |B₁⟩⟨B₁| with ε = J
/// = 0 and independent baths of total rates Γ₀, Γ₁.
pub fn bell_populations_closed_form(g0: f64, g1: f64, t: f64) -> Result<BellWeights> {
    check_rates(g0, g1, t)?;
    let e0 = (-2.0 * g0 * t).exp();
    let e1 = (-2.0 * g1 * t).exp();
    let e01 = (-2.0 * (g0 + g1) * t).exp();
    BellWeights::new(
        0.25 * (1.0 + e0 + e1 + e01),
        0.25 * (1.0 - e0 + e1 - e01),
        0.25 * (1.0 + e0 - e1 - e01),
        0.25 * (1.0 - e0 - e1 + e01),
    )
}

/// Overlap of the degraded pair with the initial |B₁⟩⟨B₁|:
/// F_e(t) = ¼(1 + e^{−2Γ₀t} + e^{−2Γ₁t} + e^{−2(Γ₀+Γ₁)t}).
pub fn entanglement_fidelity(g0: f64, g1: f64, t: f64) -> f64 {
    let e0 = (-2.0 * g0 * t).exp();
    let e1 = (-2.0 * g1 * t).exp();
    let e01 = (-2.0 * (g0 + g1) * t).exp();
    0.25 * (1.0 + e0 + e1 + e01)
}

/// The time at which F_e first reaches ½ (beyond it the pair can no longer
/// be purified). `None` when either rate is zero: F_e then approaches but
/// never reaches ½.
pub fn critical_time(g0: f64, g1: f64) -> Option<f64> {
    if g0 <= 0.0 || g1 <= 0.0 {
        return None;
    }
    // F_e is strictly decreasing from 1 to ¼; bracket and bisect
    let mut lo = 0.0f64;
    let mut hi = 10.0 / g0.min(g1);
    debug_assert!(entanglement_fidelity(g0, g1, hi) < 0.5);
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if entanglement_fidelity(g0, g1, mid) > 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Bob's state after a perfect protocol over a degraded channel: the Bell
/// weights become Pauli error weights (B₁→I, B₂→σ_z, B₃→σ_x, B₄→σ_y).
pub fn teleport(psi: &PureQubitState, weights: &BellWeights) -> DensityMatrix {
    let ket = psi.ket();
    let rho_psi: CMat = &ket * ket.adjoint();
    let corrections = [
        CMat::identity(2, 2),
        pauli(Pauli::Z),
        pauli(Pauli::X),
        pauli(Pauli::Y),
    ];
    let mut out = CMat::zeros(2, 2);
    for (p, sigma) in weights.as_array().iter().zip(corrections.iter()) {
        out += (sigma * &rho_psi * sigma.adjoint()).scale(*p);
    }
    DensityMatrix::new(out).expect("Pauli mixture of a pure state is a valid state")
}

/// Fidelity of the teleported state against the intended one:
/// F = ½ + ½(c₀*c₁+c₀c₁*)²e^{−2Γ₀t} + ½(|c₀|²−|c₁|²)²e^{−2Γ₁t}
///     − ½(c₀*c₁−c₀c₁*)²e^{−2(Γ₀+Γ₁)t}.
pub fn teleportation_fidelity(psi: &PureQubitState, g0: f64, g1: f64, t: f64) -> f64 {
    let (c0, c1) = (psi.c0(), psi.c1());
    let e0 = (-2.0 * g0 * t).exp();
    let e1 = (-2.0 * g1 * t).exp();
    let e01 = (-2.0 * (g0 + g1) * t).exp();
    let sym = c0.conj() * c1 + c0 * c1.conj(); // real
    let asym = c0.conj() * c1 - c0 * c1.conj(); // imaginary
    let pop = c0.norm_sqr() - c1.norm_sqr();
    0.5 + 0.5 * (sym * sym).re * e0 + 0.5 * pop * pop * e1 - 0.5 * (asym * asym).re * e01
}

/// Fidelity trace ⟨B_i|ρ(t)|B_i⟩ for a pair starting in Bell state `initial`,
/// propagated numerically in the Bell basis (arbitrary averaged fields).
pub fn bell_fidelity_trace(
    model: &EprModel,
    initial: BellIndex,
    t_grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let (h, r) = model.build(Basis::Bell)?;
    let l = Superoperator::build(&h, &r)?;
    let reg = QubitRegister::new(2)?;
    let rho0 = DensityMatrix::pure(&crate::qubits::basis_state(reg, initial.index())?)?;
    let mut out = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let rho = crate::liouville::propagate_fixed(&l, &rho0, t)?;
        out.push((t, rho.population(initial.index())));
    }
    Ok(out)
}

/// Bell populations under a collective bath with ε = J = 0, starting from
/// one Bell state. The singlet component is exactly invariant; the first
/// three populations follow a 3×3 kinetic system solved by exact
/// exponentiation.
pub fn collective_bath_populations(
    g0: f64,
    g1: f64,
    t: f64,
    initial: BellIndex,
) -> Result<BellWeights> {
    check_rates(g0, g1, t)?;
    if initial == BellIndex::B4 {
        return BellWeights::new(0.0, 0.0, 0.0, 1.0);
    }
    let (r0, r1) = (4.0 * g0, 4.0 * g1);
    let m = CMat::from_row_slice(
        3,
        3,
        &[
            cx(-(r0 + r1), 0.0),
            cx(r0, 0.0),
            cx(r1, 0.0),
            cx(r0, 0.0),
            cx(-r0, 0.0),
            cx(0.0, 0.0),
            cx(r1, 0.0),
            cx(0.0, 0.0),
            cx(-r1, 0.0),
        ],
    );
    let em = matrix_exponential(&m, t)?;
    let col = initial.index();
    let p = [em[(0, col)].re, em[(1, col)].re, em[(2, col)].re];
    BellWeights::new(p[0], p[1], p[2], 0.0)
}

/// Propagator for the degenerate collective-bath pair in the Bell basis;
/// used to cross-check [`collective_bath_populations`] numerically.
pub fn collective_bath_propagator(g0: f64, g1: f64, t: f64) -> Result<Propagator> {
    let model = EprModel::degenerate_collective(g0, g1);
    let (h, r) = model.build(Basis::Bell)?;
    let l = Superoperator::build(&h, &r)?;
    Propagator::new(&l, t)
}
