//! Dense complex matrix helpers shared by the whole crate.
//!
//! Matrices are `nalgebra` dynamic matrices over `Complex64`. Density
//! matrices are vectorized row-major: entry (α, β) of a d×d matrix lands at
//! flat index `α·d + β`. This convention is fixed project-wide; superoperator
//! assembly in [`crate::liouville`] depends on it.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Conjugate transpose.
pub fn dagger(m: &CMat) -> CMat {
    m.adjoint()
}

pub fn identity(dim: usize) -> CMat {
    CMat::identity(dim, dim)
}

pub fn is_finite(m: &CMat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Largest |entry| of the matrix.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// max_{ij} |m_ij − conj(m_ji)|.
pub fn hermiticity_defect(m: &CMat) -> f64 {
    let mut defect = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            defect = defect.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    defect
}

/// Maximum absolute column sum (the induced 1-norm).
pub fn one_norm(m: &CMat) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix, ascending. The caller is responsible
/// for `m` being Hermitian; the strictly lower triangle is what gets used.
pub fn hermitian_eigenvalues(m: &CMat) -> DVector<f64> {
    let eig = nalgebra::linalg::SymmetricEigen::new(m.clone());
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    DVector::from_vec(vals)
}

/// Smallest eigenvalue of the Hermitian part (m + m†)/2.
pub fn min_hermitian_eigenvalue(m: &CMat) -> f64 {
    let herm = (m + dagger(m)).scale(0.5);
    hermitian_eigenvalues(&herm)[0]
}

/// Row-major vectorization: element (α, β) at flat index α·d + β.
pub fn vec_rowmajor(m: &CMat) -> CVec {
    let d = m.nrows();
    CVec::from_fn(d * d, |idx, _| m[(idx / d, idx % d)])
}

/// Inverse of [`vec_rowmajor`].
pub fn unvec_rowmajor(v: &CVec, dim: usize) -> CMat {
    CMat::from_fn(dim, dim, |a, b| v[a * dim + b])
}

/// Kronecker product, with the row-major pair indexing used for
/// superoperators: `(a ⊗ b)[(αβ),(kl)] = a[α,k]·b[β,l]`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}
