//! Qubit registers, Pauli operators, and the Bell-basis change of basis.
//!
//! Index convention: basis state `i` of an n-qubit register is read as a bit
//! string with the leftmost bit belonging to qubit `a` (qubit 0). For n = 2,
//! index 2 ↔ |10⟩. The sign convention is σ_z|0⟩ = +|0⟩.

use crate::error::{Error, Result};
use crate::linalg::{cx, CMat, CVec};

/// An n-qubit register and its 2ⁿ-dimensional Hilbert space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QubitRegister {
    n_qubits: usize,
    dim: usize,
}

impl QubitRegister {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidParameter(
                "register needs at least one qubit".into(),
            ));
        }
        if n_qubits > 16 {
            return Err(Error::InvalidParameter(format!(
                "register of {n_qubits} qubits exceeds dense-matrix scale"
            )));
        }
        Ok(Self {
            n_qubits,
            dim: 1usize << n_qubits,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// The standard 2×2 Pauli matrix, with σ_z = diag(1, −1).
pub fn pauli(kind: Pauli) -> CMat {
    let (a, b, c, d) = match kind {
        Pauli::I => (cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(1.0, 0.0)),
        Pauli::X => (cx(0.0, 0.0), cx(1.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0)),
        Pauli::Y => (cx(0.0, 0.0), cx(0.0, -1.0), cx(0.0, 1.0), cx(0.0, 0.0)),
        Pauli::Z => (cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(-1.0, 0.0)),
    };
    CMat::from_row_slice(2, 2, &[a, b, c, d])
}

/// Kronecker-embed a single-qubit operator at `qubit_index` (0 = qubit a,
/// the leftmost tensor factor).
pub fn embed(op: &CMat, qubit_index: usize, reg: QubitRegister) -> Result<CMat> {
    if op.nrows() != 2 || op.ncols() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "embed expects a 2x2 operator, got {}x{}",
            op.nrows(),
            op.ncols()
        )));
    }
    if qubit_index >= reg.n_qubits() {
        return Err(Error::IndexOutOfRange(format!(
            "qubit {} in a {}-qubit register",
            qubit_index,
            reg.n_qubits()
        )));
    }
    let eye = CMat::identity(2, 2);
    let mut out = CMat::identity(1, 1);
    for q in 0..reg.n_qubits() {
        let factor = if q == qubit_index { op } else { &eye };
        out = out.kronecker(factor);
    }
    Ok(out)
}

/// Computational basis column vector |index⟩.
pub fn basis_state(reg: QubitRegister, index: usize) -> Result<CVec> {
    if index >= reg.dim() {
        return Err(Error::IndexOutOfRange(format!(
            "basis index {} in dimension {}",
            index,
            reg.dim()
        )));
    }
    let mut v = CVec::zeros(reg.dim());
    v[index] = cx(1.0, 0.0);
    Ok(v)
}

/// The 4×4 unitary whose columns are the Bell states |B₁⟩..|B₄⟩ expressed in
/// the standard basis {|00⟩, |01⟩, |10⟩, |11⟩}:
///
/// |B₁⟩ = (|00⟩+|11⟩)/√2, |B₂⟩ = (|00⟩−|11⟩)/√2,
/// |B₃⟩ = (|01⟩+|10⟩)/√2, |B₄⟩ = (|01⟩−|10⟩)/√2.
pub fn bell_transform() -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut u = CMat::zeros(4, 4);
    u[(0, 0)] = cx(s, 0.0);
    u[(3, 0)] = cx(s, 0.0);
    u[(0, 1)] = cx(s, 0.0);
    u[(3, 1)] = cx(-s, 0.0);
    u[(1, 2)] = cx(s, 0.0);
    u[(2, 2)] = cx(s, 0.0);
    u[(1, 3)] = cx(s, 0.0);
    u[(2, 3)] = cx(-s, 0.0);
    u
}

/// Bell state |B_i⟩ (1-based index, matching the usual labels B₁..B₄).
pub fn bell_state(index: usize) -> Result<CVec> {
    if !(1..=4).contains(&index) {
        return Err(Error::IndexOutOfRange(format!("Bell index {index}")));
    }
    Ok(bell_transform().column(index - 1).into_owned())
}
