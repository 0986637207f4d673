use std::ops::Mul;

use super::{c, max_abs_diff, CMatrix, C64, CHANNEL_TOL, MAX_QUBITS, STATE_TOL};
use crate::{Error, Result};

fn arity_of(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::DimensionMismatch {
            expected: dim.next_power_of_two(),
            got: dim,
        });
    }
    let k = dim.trailing_zeros() as usize;
    if k > MAX_QUBITS {
        return Err(Error::RegisterTooLarge(k));
    }
    Ok(k)
}

/// A `k`-qubit unitary, `U†U = I` to within [`STATE_TOL`].
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryOp {
    arity: usize,
    matrix: CMatrix,
}

impl UnitaryOp {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                got: matrix.ncols(),
            });
        }
        let arity = arity_of(matrix.nrows())?;
        let dev = max_abs_diff(
            &(matrix.adjoint() * &matrix),
            &CMatrix::identity(matrix.nrows(), matrix.nrows()),
        );
        if dev > STATE_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(UnitaryOp { arity, matrix })
    }

    /// Builds a unitary from real row-major entries.
    pub fn from_real_rows(dim: usize, rows: &[f64]) -> Result<Self> {
        if rows.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: rows.len(),
            });
        }
        let data: Vec<C64> = rows.iter().map(|&x| c(x)).collect();
        UnitaryOp::new(CMatrix::from_row_slice(dim, dim, &data))
    }

    pub fn identity(arity: usize) -> Self {
        let d = 1 << arity;
        UnitaryOp {
            arity,
            matrix: CMatrix::identity(d, d),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn adjoint(&self) -> UnitaryOp {
        UnitaryOp {
            arity: self.arity,
            matrix: self.matrix.adjoint(),
        }
    }

    /// Kronecker product; `self` acts on the leading qubits.
    pub fn kron(&self, other: &UnitaryOp) -> UnitaryOp {
        UnitaryOp {
            arity: self.arity + other.arity,
            matrix: self.matrix.kronecker(&other.matrix),
        }
    }

    /// Max elementwise distance to `other` after removing the best global
    /// phase, so `Z·X` and `-Z·X` compare equal.
    pub fn distance_up_to_phase(&self, other: &UnitaryOp) -> f64 {
        if self.arity != other.arity {
            return f64::INFINITY;
        }
        let overlap: C64 = self
            .matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            c(1.0)
        };
        max_abs_diff(&(&self.matrix * phase), &other.matrix)
    }
}

impl Mul for &UnitaryOp {
    type Output = UnitaryOp;

    /// Operator product; `(a * b)` applies `b` first.
    fn mul(self, rhs: &UnitaryOp) -> UnitaryOp {
        assert_eq!(self.arity, rhs.arity, "unitary arity mismatch");
        UnitaryOp {
            arity: self.arity,
            matrix: &self.matrix * &rhs.matrix,
        }
    }
}

fn pauli(entries: [C64; 4]) -> UnitaryOp {
    UnitaryOp {
        arity: 1,
        matrix: CMatrix::from_row_slice(2, 2, &entries),
    }
}

pub fn pauli_i() -> UnitaryOp {
    UnitaryOp::identity(1)
}

pub fn pauli_x() -> UnitaryOp {
    pauli([c(0.0), c(1.0), c(1.0), c(0.0)])
}

pub fn pauli_y() -> UnitaryOp {
    pauli([c(0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), c(0.0)])
}

pub fn pauli_z() -> UnitaryOp {
    pauli([c(1.0), c(0.0), c(0.0), c(-1.0)])
}

/// Completely positive trace-preserving map given by Kraus operators on
/// `arity` qubits.
#[derive(Clone, Debug)]
pub struct QuantumChannel {
    arity: usize,
    kraus: Vec<CMatrix>,
}

impl QuantumChannel {
    /// Validates shapes and completeness `Σ K†K = I` within [`CHANNEL_TOL`].
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or(Error::IncompleteKraus(1.0))?;
        let dim = first.nrows();
        let arity = arity_of(dim)?;
        let mut sum = CMatrix::zeros(dim, dim);
        for k in &kraus {
            if k.nrows() != dim || k.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: k.nrows().max(k.ncols()),
                });
            }
            sum += k.adjoint() * k;
        }
        let dev = max_abs_diff(&sum, &CMatrix::identity(dim, dim));
        if dev > CHANNEL_TOL {
            return Err(Error::IncompleteKraus(dev));
        }
        Ok(QuantumChannel { arity, kraus })
    }

    pub fn identity(arity: usize) -> Self {
        let d = 1 << arity;
        QuantumChannel {
            arity,
            kraus: vec![CMatrix::identity(d, d)],
        }
    }

    pub fn from_unitary(u: &UnitaryOp) -> Self {
        QuantumChannel {
            arity: u.arity(),
            kraus: vec![u.matrix().clone()],
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paulis_are_unitary_and_anticommute() {
        for p in [pauli_x(), pauli_y(), pauli_z()] {
            assert!(UnitaryOp::new(p.matrix().clone()).is_ok());
        }
        let xz = &pauli_x() * &pauli_z();
        let zx = &pauli_z() * &pauli_x();
        assert!(xz.distance_up_to_phase(&zx) < 1e-15);
        assert!(max_abs_diff(xz.matrix(), zx.matrix()) > 1.0);
    }

    #[test]
    fn rejects_non_unitary_and_incomplete_kraus() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(0.0), c(1.0)]);
        assert!(matches!(
            UnitaryOp::new(m.clone()),
            Err(Error::NotUnitary(_))
        ));
        assert!(matches!(
            QuantumChannel::new(vec![m]),
            Err(Error::IncompleteKraus(_))
        ));
        let three = CMatrix::identity(3, 3);
        assert!(UnitaryOp::new(three).is_err());
    }
}
