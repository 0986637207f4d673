use super::kernel::{conjugate, permutation_map, spread};
use super::linalg::hermitian_eigenvalues;
use super::{
    c, max_abs_diff, CMatrix, PureState, QuantumChannel, QubitLabel, Register, UnitaryOp, C64,
    CHANNEL_TOL, STATE_TOL,
};
use crate::{Error, Result};

/// Density matrix over an ordered register: Hermitian, unit trace and
/// positive semidefinite (eigenvalues ≥ −[`CHANNEL_TOL`]).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    register: Register,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates every density-matrix invariant.
    pub fn new(register: Register, matrix: CMatrix) -> Result<Self> {
        let rho = DensityMatrix { register, matrix };
        rho.validate()?;
        Ok(rho)
    }

    /// Skips validation; used for results of operations that preserve the
    /// invariants by construction.
    pub(crate) fn from_parts(register: Register, matrix: CMatrix) -> Self {
        DensityMatrix { register, matrix }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let a = psi.amplitudes();
        DensityMatrix {
            register: psi.register().clone(),
            matrix: a * a.adjoint(),
        }
    }

    /// `I / 2^n` over `labels`.
    pub fn maximally_mixed(labels: &[u32]) -> Result<Self> {
        let register = Register::from_indices(labels)?;
        let d = register.dim();
        Ok(DensityMatrix {
            register,
            matrix: CMatrix::identity(d, d) * c(1.0 / d as f64),
        })
    }

    /// Convex combination `Σ wᵢ ρᵢ` of states on the same register.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let (_, first) = parts
            .first()
            .ok_or(Error::InvalidDensityMatrix("empty mixture".into()))?;
        let d = first.dim();
        let mut m = CMatrix::zeros(d, d);
        for (w, rho) in parts {
            if rho.register != first.register {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: rho.dim(),
                });
            }
            m += &rho.matrix * c(*w);
        }
        DensityMatrix::new(first.register.clone(), m)
    }

    /// Checks Hermiticity, unit trace and the PSD floor.
    pub fn validate(&self) -> Result<()> {
        let d = self.register.dim();
        if self.matrix.nrows() != d || self.matrix.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: self.matrix.nrows(),
            });
        }
        let herm = max_abs_diff(&self.matrix, &self.matrix.adjoint());
        if herm > STATE_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = self.matrix.trace();
        if (tr - c(1.0)).norm() > STATE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr}")));
        }
        let min = self.eigenvalues().last().copied().unwrap_or(0.0);
        if min < -CHANNEL_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(())
    }

    pub fn register(&self) -> &Register {
        &self.register
    }

    pub fn labels(&self) -> &[QubitLabel] {
        self.register.labels()
    }

    pub fn num_qubits(&self) -> usize {
        self.register.len()
    }

    pub fn dim(&self) -> usize {
        self.register.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        Ok(DensityMatrix {
            register: self.register.concat(&other.register)?,
            matrix: self.matrix.kronecker(&other.matrix),
        })
    }

    pub fn permute(&self, new_order: &[QubitLabel]) -> Result<DensityMatrix> {
        if new_order.len() != self.num_qubits() {
            return Err(Error::NotAPermutation);
        }
        let perm = self
            .register
            .positions(new_order)
            .map_err(|_| Error::NotAPermutation)?;
        let map = permutation_map(&perm);
        let d = map.len();
        let matrix = CMatrix::from_fn(d, d, |i, j| self.matrix[(map[i], map[j])]);
        Ok(DensityMatrix {
            register: Register::new(new_order.to_vec())?,
            matrix,
        })
    }

    /// Same matrix under new labels (position by position).
    pub fn relabel(&self, labels: &[QubitLabel]) -> Result<DensityMatrix> {
        if labels.len() != self.num_qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits(),
                got: labels.len(),
            });
        }
        Ok(DensityMatrix {
            register: Register::new(labels.to_vec())?,
            matrix: self.matrix.clone(),
        })
    }

    pub fn apply_unitary(&self, u: &UnitaryOp, targets: &[QubitLabel]) -> Result<DensityMatrix> {
        if u.arity() != targets.len() {
            return Err(Error::ArityMismatch {
                expected: u.arity(),
                got: targets.len(),
            });
        }
        let positions = self.register.positions(targets)?;
        Ok(DensityMatrix {
            register: self.register.clone(),
            matrix: conjugate(u.matrix(), &positions, self.num_qubits(), &self.matrix),
        })
    }

    /// `ρ ↦ Σ (K ⊗ I) ρ (K ⊗ I)†` with the Kraus operators on `targets`.
    pub fn apply_channel(
        &self,
        channel: &QuantumChannel,
        targets: &[QubitLabel],
    ) -> Result<DensityMatrix> {
        if channel.arity() != targets.len() {
            return Err(Error::ArityMismatch {
                expected: channel.arity(),
                got: targets.len(),
            });
        }
        let positions = self.register.positions(targets)?;
        let n = self.num_qubits();
        let d = self.dim();
        let mut out = CMatrix::zeros(d, d);
        for k in channel.kraus() {
            out += conjugate(k, &positions, n, &self.matrix);
        }
        Ok(DensityMatrix {
            register: self.register.clone(),
            matrix: out,
        })
    }

    /// Reduced state on `keep`, in the order given. An empty `keep` yields
    /// the 1×1 matrix `[1]` over the empty register.
    pub fn partial_trace(&self, keep: &[QubitLabel]) -> Result<DensityMatrix> {
        let keep_pos = self.register.positions(keep)?;
        let traced: Vec<usize> = (0..self.num_qubits())
            .filter(|p| !keep_pos.contains(p))
            .collect();
        let n = self.num_qubits();
        let kept = spread(&keep_pos, n);
        let rest = spread(&traced, n);
        let dk = kept.len();
        let matrix = CMatrix::from_fn(dk, dk, |a, b| {
            rest.iter()
                .map(|&t| self.matrix[(kept[a] + t, kept[b] + t)])
                .sum::<C64>()
        });
        Ok(DensityMatrix {
            register: Register::new(keep.to_vec())?,
            matrix,
        })
    }

    /// `⟨ψ|ρ|ψ⟩`, compared position by position.
    pub fn fidelity(&self, psi: &PureState) -> Result<f64> {
        let a = psi.amplitudes();
        if a.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: a.len(),
            });
        }
        Ok((a.adjoint() * &self.matrix * a)[(0, 0)].re)
    }

    /// `−Σ λ log₂ λ` in bits; eigenvalues below 1e-12 count as zero.
    pub fn von_neumann_entropy(&self) -> f64 {
        self.eigenvalues()
            .into_iter()
            .filter(|&l| l > 1e-12)
            .map(|l| -l * l.log2())
            .sum::<f64>()
            .max(0.0)
    }

    /// Largest elementwise distance to `other` (same dimension).
    pub fn max_deviation(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(max_abs_diff(&self.matrix, &other.matrix))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::labels;

    #[test]
    fn maximally_mixed_entropy_and_fidelity() {
        let rho = DensityMatrix::maximally_mixed(&[1, 2, 3]).unwrap();
        assert!((rho.von_neumann_entropy() - 3.0).abs() < 1e-12);
        let psi = PureState::basis(&[1, 2, 3], "101").unwrap();
        assert!((rho.fidelity(&psi).unwrap() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn partial_trace_of_product() {
        let a = PureState::from_real_kets(&[1], &[("0", 0.6), ("1", 0.8)]).unwrap();
        let b = PureState::basis(&[2], "1").unwrap();
        let rho = a.tensor(&b).unwrap().to_density();
        let ra = rho.partial_trace(&labels([1])).unwrap();
        assert!(ra.max_deviation(&a.to_density()).unwrap() < 1e-15);
        let scalar = rho.partial_trace(&[]).unwrap();
        assert_eq!(scalar.dim(), 1);
        assert!((scalar.trace() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_matrices_rejected() {
        let r = Register::from_indices(&[1]).unwrap();
        let not_herm = CMatrix::from_row_slice(2, 2, &[c(0.5), c(0.3), c(0.0), c(0.5)]);
        assert!(DensityMatrix::new(r.clone(), not_herm).is_err());
        let negative = CMatrix::from_row_slice(2, 2, &[c(1.5), c(0.0), c(0.0), c(-0.5)]);
        assert!(DensityMatrix::new(r.clone(), negative).is_err());
        let bad_trace = CMatrix::identity(2, 2);
        assert!(DensityMatrix::new(r, bad_trace).is_err());
    }

    #[test]
    fn fidelity_dimension_mismatch() {
        let rho = DensityMatrix::maximally_mixed(&[1, 2]).unwrap();
        let psi = PureState::basis(&[1], "0").unwrap();
        assert!(rho.fidelity(&psi).is_err());
    }
}
