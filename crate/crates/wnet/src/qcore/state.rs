use super::kernel::{apply_to_columns, permutation_map};
use super::{
    basis_index, c, CVector, DensityMatrix, QubitLabel, Register, UnitaryOp, C64, STATE_TOL,
};
use crate::{Error, Result};

/// Normalized amplitude vector over an ordered register.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    register: Register,
    amplitudes: CVector,
}

impl PureState {
    /// Wraps `amplitudes`, which must already have unit norm.
    pub fn new(register: Register, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != register.dim() {
            return Err(Error::DimensionMismatch {
                expected: register.dim(),
                got: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(PureState {
            register,
            amplitudes,
        })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(register: Register, amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        PureState::new(register, amplitudes.unscale(norm))
    }

    /// Superposition of computational basis kets, e.g.
    /// `from_kets(&[1, 2], &[("00", a), ("11", b)])`. Amplitudes of repeated
    /// kets add. The result must be normalized.
    pub fn from_kets(labels: &[u32], terms: &[(&str, C64)]) -> Result<Self> {
        let register = Register::from_indices(labels)?;
        let mut amps = CVector::zeros(register.dim());
        for (bits, amp) in terms {
            if bits.len() != register.len() {
                return Err(Error::DimensionMismatch {
                    expected: register.len(),
                    got: bits.len(),
                });
            }
            let idx = basis_index(bits).ok_or(Error::DimensionMismatch {
                expected: register.len(),
                got: bits.len(),
            })?;
            amps[idx] += amp;
        }
        PureState::new(register, amps)
    }

    /// Like [`PureState::from_kets`] with real amplitudes.
    pub fn from_real_kets(labels: &[u32], terms: &[(&str, f64)]) -> Result<Self> {
        let terms: Vec<(&str, C64)> = terms.iter().map(|&(b, a)| (b, c(a))).collect();
        PureState::from_kets(labels, &terms)
    }

    /// Constant-data constructor for states built inside the crate; the
    /// terms are rescaled to unit norm.
    pub(crate) fn normalized_from_kets(labels: &[u32], terms: &[(&str, C64)]) -> PureState {
        let register = Register::from_indices(labels).expect("valid register");
        let mut amps = CVector::zeros(register.dim());
        for (bits, amp) in terms {
            amps[basis_index(bits).expect("valid ket")] += amp;
        }
        PureState::normalized(register, amps).expect("nonzero state")
    }

    /// Computational basis state `|bits⟩`.
    pub fn basis(labels: &[u32], bits: &str) -> Result<Self> {
        PureState::from_kets(labels, &[(bits, c(1.0))])
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

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// Amplitude of the computational basis ket `bits` (register order).
    pub fn amplitude(&self, bits: &str) -> Option<C64> {
        if bits.len() != self.num_qubits() {
            return None;
        }
        basis_index(bits).map(|i| self.amplitudes[i])
    }

    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let register = self.register.concat(&other.register)?;
        Ok(PureState {
            register,
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
        })
    }

    /// Reorders the register to `new_order` without changing the physical
    /// state.
    pub fn permute(&self, new_order: &[QubitLabel]) -> Result<PureState> {
        if new_order.len() != self.num_qubits() {
            return Err(Error::NotAPermutation);
        }
        let perm = self
            .register
            .positions(new_order)
            .map_err(|_| Error::NotAPermutation)?;
        let map = permutation_map(&perm);
        let amplitudes =
            CVector::from_iterator(map.len(), map.iter().map(|&old| self.amplitudes[old]));
        Ok(PureState {
            register: Register::new(new_order.to_vec())?,
            amplitudes,
        })
    }

    /// Same amplitudes under new labels (position by position).
    pub fn relabel(&self, labels: &[QubitLabel]) -> Result<PureState> {
        if labels.len() != self.num_qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits(),
                got: labels.len(),
            });
        }
        Ok(PureState {
            register: Register::new(labels.to_vec())?,
            amplitudes: self.amplitudes.clone(),
        })
    }

    pub fn apply_unitary(&self, u: &UnitaryOp, targets: &[QubitLabel]) -> Result<PureState> {
        if u.arity() != targets.len() {
            return Err(Error::ArityMismatch {
                expected: u.arity(),
                got: targets.len(),
            });
        }
        let positions = self.register.positions(targets)?;
        let mut amplitudes = self.amplitudes.clone();
        apply_to_columns(
            u.matrix(),
            &positions,
            self.num_qubits(),
            amplitudes.as_mut_slice(),
        );
        Ok(PureState {
            register: self.register.clone(),
            amplitudes,
        })
    }

    /// `⟨self|other⟩`, compared position by position.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.amplitudes.len() != other.amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amplitudes.len(),
                got: other.amplitudes.len(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Amplitude-by-amplitude equality within `tol`.
    pub fn approx_eq(&self, other: &PureState, tol: f64) -> bool {
        self.amplitudes.len() == other.amplitudes.len()
            && self
                .amplitudes
                .iter()
                .zip(other.amplitudes.iter())
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Equality up to a global phase: `|⟨self|other⟩| = 1` within `tol`.
    pub fn eq_up_to_phase(&self, other: &PureState, tol: f64) -> bool {
        match self.inner(other) {
            Ok(ip) => (ip.norm() - 1.0).abs() <= tol,
            Err(_) => false,
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{labels, pauli_x};

    #[test]
    fn tensor_of_basis_states() {
        let a = PureState::basis(&[1], "0").unwrap();
        let b = PureState::basis(&[2], "1").unwrap();
        let ab = a.tensor(&b).unwrap();
        assert_eq!(ab.amplitude("01"), Some(c(1.0)));
        assert_eq!(ab.labels(), &labels([1, 2]));
    }

    #[test]
    fn tensor_rejects_overlapping_labels() {
        let a = PureState::basis(&[1], "0").unwrap();
        assert!(matches!(a.tensor(&a), Err(Error::LabelCollision(_))));
    }

    #[test]
    fn permute_interleaved_labels() {
        // (|000⟩+|101⟩)/√2 over (1,3,2) is (|000⟩+|110⟩)/√2 over (1,2,3).
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = PureState::from_real_kets(&[1, 3, 2], &[("000", h), ("101", h)]).unwrap();
        let p = s.permute(&labels([1, 2, 3])).unwrap();
        let want = PureState::from_real_kets(&[1, 2, 3], &[("000", h), ("110", h)]).unwrap();
        assert!(p.approx_eq(&want, 1e-15));
        assert_eq!(p.labels(), want.labels());
        assert!(s.permute(&labels([1, 2])).is_err());
        assert!(s.permute(&labels([1, 2, 4])).is_err());
    }

    #[test]
    fn unitary_arity_is_checked() {
        let s = PureState::basis(&[1, 2], "00").unwrap();
        assert!(matches!(
            s.apply_unitary(&pauli_x(), &labels([1, 2])),
            Err(Error::ArityMismatch { .. })
        ));
        let flipped = s.apply_unitary(&pauli_x(), &labels([2])).unwrap();
        assert_eq!(flipped.amplitude("01"), Some(c(1.0)));
    }

    #[test]
    fn normalization_enforced() {
        assert!(matches!(
            PureState::from_real_kets(&[1], &[("0", 1.0), ("1", 1.0)]),
            Err(Error::NotNormalized(_))
        ));
    }
}
