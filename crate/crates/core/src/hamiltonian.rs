//! Hamiltonians (ħ = 1) and the explicit two-qubit gate matrix.

use crate::error::{Error, Result};
use crate::linalg::{cx, hermiticity_defect, is_finite, CMat};

const HERMITICITY_TOL: f64 = 1e-9;

/// A Hermitian operator in energy units.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    mat: CMat,
}

impl Hamiltonian {
    pub fn new(mat: CMat) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "Hamiltonian must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if !is_finite(&mat) {
            return Err(Error::NonFinite);
        }
        let defect = hermiticity_defect(&mat);
        if defect > HERMITICITY_TOL {
            return Err(Error::InvalidParameter(format!(
                "Hamiltonian hermiticity defect {defect:.3e}"
            )));
        }
        Ok(Self { mat })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            mat: CMat::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    /// U† H U.
    pub fn conjugated(&self, u: &CMat) -> Result<Self> {
        if u.nrows() != self.dim() {
            return Err(Error::DimensionMismatch(
                "basis change dimension does not match Hamiltonian".into(),
            ));
        }
        Self::new(u.adjoint() * &self.mat * u)
    }
}

/// The symmetric flip-flop operator: 1 between |01⟩ and |10⟩, zero elsewhere.
/// This is the generator of the XY inter-qubit coupling.
pub fn flip_flop_operator() -> CMat {
    let mut m = CMat::zeros(4, 4);
    m[(1, 2)] = cx(1.0, 0.0);
    m[(2, 1)] = cx(1.0, 0.0);
    m
}

/// The two-qubit control Hamiltonian in the standard basis
/// {|00⟩, |01⟩, |10⟩, |11⟩}:
///
/// ```text
/// ⎡ εa+εb   Jb      Ja      0    ⎤
/// ⎢ Jb      εa−εb   g       Ja   ⎥
/// ⎢ Ja      g       εb−εa   Jb   ⎥
/// ⎣ 0       Ja      Jb     −εa−εb⎦
/// ```
pub fn two_qubit_gate(eps_a: f64, eps_b: f64, j_a: f64, j_b: f64, g: f64) -> Result<Hamiltonian> {
    for (name, v) in [
        ("eps_a", eps_a),
        ("eps_b", eps_b),
        ("j_a", j_a),
        ("j_b", j_b),
        ("g", g),
    ] {
        if !v.is_finite() {
            return Err(Error::InvalidParameter(format!("non-finite field {name}")));
        }
    }
    let r = |x: f64| cx(x, 0.0);
    let mat = CMat::from_row_slice(
        4,
        4,
        &[
            r(eps_a + eps_b),
            r(j_b),
            r(j_a),
            r(0.0),
            r(j_b),
            r(eps_a - eps_b),
            r(g),
            r(j_a),
            r(j_a),
            r(g),
            r(eps_b - eps_a),
            r(j_b),
            r(0.0),
            r(j_a),
            r(j_b),
            r(-eps_a - eps_b),
        ],
    );
    Hamiltonian::new(mat)
}

/// Hamiltonian of two non-interacting qubits (the entangled-pair channel
/// model): the gate matrix with g = 0.
pub fn epr_pair(eps_a: f64, eps_b: f64, j_a: f64, j_b: f64) -> Result<Hamiltonian> {
    two_qubit_gate(eps_a, eps_b, j_a, j_b, 0.0)
}
