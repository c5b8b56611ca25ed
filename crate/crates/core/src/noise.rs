//! White-noise fluctuation channels and the correlation tensor they generate.
//!
//! Each channel is a real symmetric operator `A` whose coefficient fluctuates
//! with zero mean and δ-correlated variance γ. Distinct channels are
//! uncorrelated, so the second moments of the fluctuating Hamiltonian form
//! the Gram tensor R_{ij;kl} = Σ_m γ_m (A_m)_{ij} (A_m)_{kl}. A collective
//! bath (one field seen by several qubits) is expressed as a single channel
//! whose operator is the sum of the per-qubit operators.

use crate::error::{Error, Result};
use crate::linalg::{is_finite, CMat};
use std::collections::BTreeMap;

const SYMMETRY_TOL: f64 = 1e-12;

/// One independent fluctuation source: a real symmetric operator with
/// strength γ ≥ 0 (energy units).
#[derive(Debug, Clone, PartialEq)]
pub struct FluctuationChannel {
    operator: CMat,
    strength: f64,
    bath_label: String,
}

impl FluctuationChannel {
    pub fn new(operator: CMat, strength: f64, bath_label: impl Into<String>) -> Result<Self> {
        if operator.nrows() != operator.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "channel operator must be square, got {}x{}",
                operator.nrows(),
                operator.ncols()
            )));
        }
        if !is_finite(&operator) {
            return Err(Error::NonFinite);
        }
        let label = bath_label.into();
        for i in 0..operator.nrows() {
            for j in 0..operator.ncols() {
                if operator[(i, j)].im.abs() > SYMMETRY_TOL {
                    return Err(Error::NotRealSymmetric(format!(
                        "channel '{label}' has complex entry at ({i},{j})"
                    )));
                }
                if (operator[(i, j)].re - operator[(j, i)].re).abs() > SYMMETRY_TOL {
                    return Err(Error::NotRealSymmetric(format!(
                        "channel '{label}' is asymmetric at ({i},{j})"
                    )));
                }
            }
        }
        if !strength.is_finite() || strength < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "channel '{label}' strength {strength} must be a finite non-negative number"
            )));
        }
        Ok(Self {
            operator,
            strength,
            bath_label: label,
        })
    }

    pub fn operator(&self) -> &CMat {
        &self.operator
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn bath_label(&self) -> &str {
        &self.bath_label
    }

    pub fn dim(&self) -> usize {
        self.operator.nrows()
    }

    /// The same channel expressed in another basis: A ↦ U† A U. The result
    /// must still be real symmetric (true for any real orthogonal U).
    pub fn conjugated(&self, u: &CMat) -> Result<Self> {
        if u.nrows() != self.dim() {
            return Err(Error::DimensionMismatch(
                "basis change dimension does not match channel".into(),
            ));
        }
        Self::new(
            u.adjoint() * &self.operator * u,
            self.strength,
            self.bath_label.clone(),
        )
    }
}

/// Sparse second-moment tensor R_{ij;kl} with the index symmetry
/// R_{ij;kl} = R_{ji;kl} = R_{ij;lk} = R_{ji;lk} = R_{kl;ij}.
/// Only the lexicographically smallest equivalent quadruple is stored;
/// lookups of anything unstored return 0.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTensor {
    dim: usize,
    entries: BTreeMap<[usize; 4], f64>,
}

impl CorrelationTensor {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            entries: BTreeMap::new(),
        }
    }

    /// Gram construction from a set of uncorrelated channels.
    pub fn from_channels(channels: &[FluctuationChannel]) -> Result<Self> {
        let dim = match channels.first() {
            None => return Ok(Self::zero(0)),
            Some(c) => c.dim(),
        };
        for c in channels {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "channel '{}' has dimension {} but expected {}",
                    c.bath_label(),
                    c.dim(),
                    dim
                )));
            }
        }
        let mut entries = BTreeMap::new();
        for i in 0..dim {
            for j in i..dim {
                for k in 0..dim {
                    for l in k..dim {
                        if (k, l) < (i, j) {
                            continue;
                        }
                        let v: f64 = channels
                            .iter()
                            .map(|c| {
                                c.strength()
                                    * c.operator()[(i, j)].re
                                    * c.operator()[(k, l)].re
                            })
                            .sum();
                        if v != 0.0 {
                            entries.insert([i, j, k, l], v);
                        }
                    }
                }
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn canonical(i: usize, j: usize, k: usize, l: usize) -> [usize; 4] {
        let p = (i.min(j), i.max(j));
        let q = (k.min(l), k.max(l));
        if q < p {
            [q.0, q.1, p.0, p.1]
        } else {
            [p.0, p.1, q.0, q.1]
        }
    }

    /// R_{ij;kl}, identical for all symmetry-equivalent index orderings.
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.entries
            .get(&Self::canonical(i, j, k, l))
            .copied()
            .unwrap_or(0.0)
    }

    /// Stored canonical representatives and their values.
    pub fn irreducible_entries(&self) -> impl Iterator<Item = ([usize; 4], f64)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    pub fn n_irreducible(&self) -> usize {
        self.entries.len()
    }

    /// Dense view of R as a symmetric dim²×dim² matrix over row-major index
    /// pairs; a Gram matrix of the channels, hence positive semidefinite.
    pub fn as_pair_matrix(&self) -> nalgebra::DMatrix<f64> {
        let d = self.dim;
        nalgebra::DMatrix::from_fn(d * d, d * d, |row, col| {
            self.get(row / d, row % d, col / d, col % d)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cx;
    use crate::qubits::{embed, pauli, Pauli, QubitRegister};

    fn channel(op: CMat, strength: f64, label: &str) -> FluctuationChannel {
        FluctuationChannel::new(op, strength, label).unwrap()
    }

    fn epr_channels_bell_basis(
        g0a: f64,
        g0b: f64,
        g1a: f64,
        g1b: f64,
    ) -> Vec<FluctuationChannel> {
        let reg = QubitRegister::new(2).unwrap();
        let u = crate::qubits::bell_transform();
        [
            (pauli(Pauli::Z), 0, g0a, "eps_a"),
            (pauli(Pauli::Z), 1, g0b, "eps_b"),
            (pauli(Pauli::X), 0, g1a, "j_a"),
            (pauli(Pauli::X), 1, g1b, "j_b"),
        ]
        .into_iter()
        .map(|(op, q, s, label)| {
            channel(embed(&op, q, reg).unwrap(), s, label)
                .conjugated(&u)
                .unwrap()
        })
        .collect()
    }

    #[test]
    fn empty_channel_list_gives_zero_tensor() {
        let r = CorrelationTensor::from_channels(&[]).unwrap();
        assert_eq!(r.n_irreducible(), 0);
        assert_eq!(r.get(0, 0, 0, 0), 0.0);
    }

    #[test]
    fn independent_pair_channels_reproduce_the_six_irreducible_elements() {
        // In the Bell basis (0-based indices): R₁₂;₁₂ → get(0,1,0,1), etc.
        let (g0a, g0b, g1a, g1b) = (0.1, 0.2, 0.3, 0.4);
        let r =
            CorrelationTensor::from_channels(&epr_channels_bell_basis(g0a, g0b, g1a, g1b)).unwrap();
        assert!((r.get(0, 1, 0, 1) - (g0a + g0b)).abs() < 1e-12);
        assert!((r.get(0, 1, 2, 3) - (g0a - g0b)).abs() < 1e-12);
        assert!((r.get(0, 2, 0, 2) - (g1a + g1b)).abs() < 1e-12);
        assert!((r.get(0, 2, 1, 3) - (g1b - g1a)).abs() < 1e-12);
        assert!((r.get(1, 3, 1, 3) - (g1a + g1b)).abs() < 1e-12);
        assert!((r.get(2, 3, 2, 3) - (g0a + g0b)).abs() < 1e-12);
        // the transformed fluctuation h₂₃ vanishes, so R₁₃;₂₃ has to be zero
        assert_eq!(r.get(0, 2, 1, 2), 0.0);
    }

    #[test]
    fn collective_pair_channels_reduce_to_two_irreducible_elements() {
        let reg = QubitRegister::new(2).unwrap();
        let u = crate::qubits::bell_transform();
        let za = embed(&pauli(Pauli::Z), 0, reg).unwrap();
        let zb = embed(&pauli(Pauli::Z), 1, reg).unwrap();
        let xa = embed(&pauli(Pauli::X), 0, reg).unwrap();
        let xb = embed(&pauli(Pauli::X), 1, reg).unwrap();
        let channels = vec![
            channel(za + zb, 0.1, "eps").conjugated(&u).unwrap(),
            channel(xa + xb, 0.1, "j").conjugated(&u).unwrap(),
        ];
        let r = CorrelationTensor::from_channels(&channels).unwrap();
        assert!((r.get(0, 1, 0, 1) - 0.4).abs() < 1e-12);
        assert!((r.get(0, 2, 0, 2) - 0.4).abs() < 1e-12);
        assert_eq!(r.n_irreducible(), 2);
    }

    #[test]
    fn symmetry_equivalent_lookups_are_bit_identical() {
        let r =
            CorrelationTensor::from_channels(&epr_channels_bell_basis(0.13, 0.29, 0.31, 0.47))
                .unwrap();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        let v = r.get(i, j, k, l);
                        assert_eq!(v, r.get(j, i, k, l));
                        assert_eq!(v, r.get(i, j, l, k));
                        assert_eq!(v, r.get(j, i, l, k));
                        assert_eq!(v, r.get(k, l, i, j));
                    }
                }
            }
        }
    }

    #[test]
    fn basis_covariance_of_the_gram_construction() {
        // The tensor built from Bell-conjugated operators must equal the
        // index transform of the standard-basis tensor:
        // M_bell = (U⊗U)ᵀ · M_std · (U⊗U) on pair matrices (U is real here).
        let u = crate::qubits::bell_transform();
        let reg = QubitRegister::new(2).unwrap();
        let std_channels: Vec<FluctuationChannel> = [
            (pauli(Pauli::Z), 0, 0.17, "eps_a"),
            (pauli(Pauli::Z), 1, 0.05, "eps_b"),
            (pauli(Pauli::X), 0, 0.23, "j_a"),
            (pauli(Pauli::X), 1, 0.41, "j_b"),
        ]
        .into_iter()
        .map(|(op, q, s, label)| channel(embed(&op, q, reg).unwrap(), s, label))
        .collect();
        let bell_channels: Vec<FluctuationChannel> = std_channels
            .iter()
            .map(|c| c.conjugated(&u).unwrap())
            .collect();
        let m_bell = CorrelationTensor::from_channels(&bell_channels)
            .unwrap()
            .as_pair_matrix();
        let m_std = CorrelationTensor::from_channels(&std_channels)
            .unwrap()
            .as_pair_matrix();
        let u_real = nalgebra::DMatrix::from_fn(4, 4, |i, j| u[(i, j)].re);
        let w = u_real.kronecker(&u_real);
        let transformed = w.transpose() * m_std * w;
        assert!((m_bell - transformed).iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn pair_matrix_is_positive_semidefinite() {
        let r =
            CorrelationTensor::from_channels(&epr_channels_bell_basis(0.1, 0.2, 0.3, 0.4)).unwrap();
        let m = r.as_pair_matrix();
        let cm = CMat::from_fn(m.nrows(), m.ncols(), |i, j| cx(m[(i, j)], 0.0));
        let min = crate::linalg::hermitian_eigenvalues(&cm)[0];
        assert!(min > -1e-12, "min eigenvalue {min}");
    }

    #[test]
    fn asymmetric_operator_is_rejected() {
        let mut op = CMat::zeros(2, 2);
        op[(0, 1)] = cx(1.0, 0.0);
        assert!(matches!(
            FluctuationChannel::new(op, 0.1, "bad"),
            Err(Error::NotRealSymmetric(_))
        ));
    }

    #[test]
    fn complex_operator_is_rejected() {
        let mut op = CMat::zeros(2, 2);
        op[(0, 1)] = cx(0.0, 1.0);
        op[(1, 0)] = cx(0.0, 1.0);
        assert!(matches!(
            FluctuationChannel::new(op, 0.1, "bad"),
            Err(Error::NotRealSymmetric(_))
        ));
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let a = channel(CMat::identity(2, 2), 0.1, "a");
        let b = channel(CMat::identity(4, 4), 0.1, "b");
        assert!(CorrelationTensor::from_channels(&[a, b]).is_err());
    }
}
