//! Validated density matrices and density diagnostics.

use crate::error::{Error, Result};
use crate::linalg::{
    cx, hermiticity_defect, is_finite, min_hermitian_eigenvalue, CMat, CVec,
};
use num_complex::Complex64;

pub const DEFAULT_DENSITY_TOL: f64 = 1e-9;

/// Hermiticity, trace, and positivity diagnostics of a candidate state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityDiagnostics {
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
}

impl DensityDiagnostics {
    /// All three conditions within `tol` (eigenvalues may undershoot zero by
    /// `tol`).
    pub fn within(&self, tol: f64) -> bool {
        self.hermiticity_defect <= tol && self.trace_defect <= tol && self.min_eigenvalue >= -tol
    }
}

/// Compute the three density defects of a square matrix. Never fails; the
/// eigenvalue reported is that of the Hermitian part.
pub fn check_density(mat: &CMat) -> DensityDiagnostics {
    let trace: Complex64 = mat.trace();
    DensityDiagnostics {
        hermiticity_defect: hermiticity_defect(mat),
        trace_defect: (trace - cx(1.0, 0.0)).norm(),
        min_eigenvalue: min_hermitian_eigenvalue(mat),
    }
}

/// A Hermitian, unit-trace, positive-semidefinite matrix (within `tol`).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMat,
    tol: f64,
}

impl DensityMatrix {
    pub fn new(mat: CMat) -> Result<Self> {
        Self::with_tol(mat, DEFAULT_DENSITY_TOL)
    }

    pub fn with_tol(mat: CMat, tol: f64) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "density matrix must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if !is_finite(&mat) {
            return Err(Error::NonFinite);
        }
        let diag = check_density(&mat);
        if !diag.within(tol) {
            return Err(Error::InvalidDensity(format!(
                "hermiticity defect {:.3e}, trace defect {:.3e}, min eigenvalue {:.3e} (tol {:.1e})",
                diag.hermiticity_defect, diag.trace_defect, diag.min_eigenvalue, tol
            )));
        }
        Ok(Self { mat, tol })
    }

    /// Projector |ψ⟩⟨ψ| of a normalized state vector.
    pub fn pure(state: &CVec) -> Result<Self> {
        let norm = state.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDensity(format!(
                "pure state norm {norm} is not 1"
            )));
        }
        let mat = state * state.adjoint();
        Self::new(mat)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let mat = CMat::identity(dim, dim).scale(1.0 / dim as f64);
        Self {
            mat,
            tol: DEFAULT_DENSITY_TOL,
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    /// Diagonal population ⟨i|ρ|i⟩.
    pub fn population(&self, index: usize) -> f64 {
        self.mat[(index, index)].re
    }

    /// ⟨φ|ρ|φ⟩ for a state vector φ.
    pub fn expectation(&self, phi: &CVec) -> f64 {
        (phi.adjoint() * &self.mat * phi)[(0, 0)].re
    }

    /// Tr(ρσ).
    pub fn overlap(&self, other: &DensityMatrix) -> f64 {
        (&self.mat * &other.mat).trace().re
    }

    /// Tr(ρ²).
    pub fn purity(&self) -> f64 {
        (&self.mat * &self.mat).trace().re
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cx;

    #[test]
    fn maximally_mixed_diagnostics() {
        let rho = DensityMatrix::maximally_mixed(4);
        let d = check_density(rho.matrix());
        assert!(d.hermiticity_defect < 1e-15);
        assert!(d.trace_defect < 1e-15);
        assert!((d.min_eigenvalue - 0.25).abs() < 1e-12);
    }

    #[test]
    fn pure_projector_diagnostics() {
        let mut v = CVec::zeros(4);
        v[0] = cx(1.0, 0.0);
        let rho = DensityMatrix::pure(&v).unwrap();
        let d = check_density(rho.matrix());
        assert!(d.hermiticity_defect < 1e-15);
        assert!(d.trace_defect < 1e-15);
        assert!(d.min_eigenvalue.abs() < 1e-12);
        assert!((rho.purity() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn non_hermitian_input_is_reported_and_rejected() {
        let mut m = CMat::zeros(2, 2);
        m[(0, 0)] = cx(1.0, 0.0);
        m[(0, 1)] = cx(1.0, 0.0);
        let d = check_density(&m);
        assert!((d.hermiticity_defect - 1.0).abs() < 1e-15);
        assert!(DensityMatrix::new(m).is_err());
    }

    #[test]
    fn negative_eigenvalue_is_rejected() {
        let m = CMat::from_diagonal(&CVec::from_vec(vec![cx(1.5, 0.0), cx(-0.5, 0.0)]));
        match DensityMatrix::new(m) {
            Err(Error::InvalidDensity(_)) => {}
            other => panic!("expected InvalidDensity, got {other:?}"),
        }
    }
}
