//! Matrix exponential via scaling-and-squaring with a Padé(13) core.
//!
//! The classic Higham recipe: scale `A` by 2⁻ˢ until its 1-norm is below the
//! order-13 threshold, evaluate the diagonal Padé approximant with one LU
//! solve, then square `s` times. For the matrix sizes in this crate (≤ 64)
//! the backward error is at the double-precision roundoff level, comfortably
//! inside the 1e-12 budget the propagation layer assumes.

use crate::error::{Error, Result};
use crate::linalg::{identity, is_finite, one_norm, CMat};
use num_complex::Complex64;

// Padé(13) numerator coefficients (Higham 2005, Table 10.4 lineage).
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

// 1-norm threshold below which Padé(13) meets unit roundoff backward error.
const THETA13: f64 = 4.25;

/// exp(M) for a square complex matrix.
pub fn expm(m: &CMat) -> Result<CMat> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "expm needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if !is_finite(m) {
        return Err(Error::NonFinite);
    }
    let dim = m.nrows();
    if dim == 0 {
        return Ok(CMat::zeros(0, 0));
    }

    let norm = one_norm(m);
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as u32
    } else {
        0
    };
    let a = m.scale((0.5f64).powi(squarings as i32));

    let eye = identity(dim);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;

    let c = |k: usize| Complex64::new(PADE13[k], 0.0);
    let u_inner = &a6 * (&a6 * c(13) + &a4 * c(11) + &a2 * c(9))
        + &a6 * c(7)
        + &a4 * c(5)
        + &a2 * c(3)
        + &eye * c(1);
    let u = &a * u_inner;
    let v = &a6 * (&a6 * c(12) + &a4 * c(10) + &a2 * c(8))
        + &a6 * c(6)
        + &a4 * c(4)
        + &a2 * c(2)
        + &eye * c(0);

    let lhs = &v - &u;
    let rhs = &v + &u;
    let mut result = lhs
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::SingularSystem("Padé denominator is singular".into()))?;

    for _ in 0..squarings {
        result = &result * &result;
    }
    Ok(result)
}

/// exp(M·t).
pub fn matrix_exponential(m: &CMat, t: f64) -> Result<CMat> {
    if !t.is_finite() {
        return Err(Error::InvalidParameter(format!("non-finite time {t}")));
    }
    expm(&m.scale(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cx, max_abs};

    #[test]
    fn exp_of_zero_is_identity() {
        let z = CMat::zeros(3, 3);
        let e = matrix_exponential(&z, 1.7).unwrap();
        assert!(max_abs(&(e - identity(3))) < 1e-15);
    }

    #[test]
    fn diagonal_exponential_of_minus_i_sigma_z() {
        // M = −iσ_z at t = π/2 → diag(e^{−iπ/2}, e^{iπ/2})
        let m = CMat::from_diagonal(&crate::linalg::CVec::from_vec(vec![
            cx(0.0, -1.0),
            cx(0.0, 1.0),
        ]));
        let e = matrix_exponential(&m, std::f64::consts::FRAC_PI_2).unwrap();
        assert!((e[(0, 0)] - cx(0.0, -1.0)).norm() < 1e-14);
        assert!((e[(1, 1)] - cx(0.0, 1.0)).norm() < 1e-14);
        assert!(e[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn group_inverse_round_trip() {
        let m = CMat::from_fn(4, 4, |i, j| cx(0.3 * (i as f64 - j as f64), 0.2 * (i + j) as f64));
        let t = 2.3;
        let fwd = matrix_exponential(&m, t).unwrap();
        let bwd = matrix_exponential(&m, -t).unwrap();
        assert!(max_abs(&(fwd * bwd - identity(4))) < 1e-10);
    }

    #[test]
    fn large_norm_triggers_squaring_and_stays_accurate() {
        // nilpotent block: exp is exact polynomial
        let mut m = CMat::zeros(2, 2);
        m[(0, 1)] = cx(40.0, 0.0);
        let e = expm(&m).unwrap();
        assert!((e[(0, 1)] - cx(40.0, 0.0)).norm() < 1e-9);
        assert!((e[(0, 0)] - cx(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn rejects_non_finite_input() {
        let mut m = CMat::zeros(2, 2);
        m[(1, 0)] = cx(f64::NAN, 0.0);
        assert!(matches!(expm(&m), Err(Error::NonFinite)));
    }
}
