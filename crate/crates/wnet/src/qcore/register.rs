use std::fmt;

use crate::qcore::MAX_QUBITS;
use crate::{Error, Result};

/// One-based qubit label, matching the numbering used for network qubits
/// (`1, 2, 3` for the prepared state, `4, 5, …` for Bell-pair halves).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitLabel(u32);

impl QubitLabel {
    pub fn new(index: u32) -> Result<Self> {
        if index == 0 {
            return Err(Error::InvalidLabel(index));
        }
        Ok(QubitLabel(index))
    }

    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for QubitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl TryFrom<u32> for QubitLabel {
    type Error = Error;

    fn try_from(value: u32) -> Result<Self> {
        QubitLabel::new(value)
    }
}

/// Builds a label array from literal indices.
///
/// # Panics
///
/// Panics if any index is zero. Use [`QubitLabel::new`] for untrusted input.
pub fn labels<const N: usize>(indices: [u32; N]) -> [QubitLabel; N] {
    indices.map(|i| QubitLabel::new(i).expect("qubit labels start at 1"))
}

/// Ordered list of distinct qubit labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Register(Vec<QubitLabel>);

impl Register {
    pub fn new(labels: Vec<QubitLabel>) -> Result<Self> {
        if labels.len() > MAX_QUBITS {
            return Err(Error::RegisterTooLarge(labels.len()));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::LabelCollision(*l));
            }
        }
        Ok(Register(labels))
    }

    pub fn from_indices(indices: &[u32]) -> Result<Self> {
        let labels = indices
            .iter()
            .map(|&i| QubitLabel::new(i))
            .collect::<Result<Vec<_>>>()?;
        Register::new(labels)
    }

    pub fn empty() -> Self {
        Register(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> usize {
        1 << self.0.len()
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.0
    }

    pub fn contains(&self, label: QubitLabel) -> bool {
        self.0.contains(&label)
    }

    pub fn position(&self, label: QubitLabel) -> Result<usize> {
        self.0
            .iter()
            .position(|&l| l == label)
            .ok_or(Error::UnknownLabel(label))
    }

    /// Positions of `targets`, rejecting unknown and repeated labels.
    pub fn positions(&self, targets: &[QubitLabel]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(targets.len());
        for (i, &t) in targets.iter().enumerate() {
            if targets[..i].contains(&t) {
                return Err(Error::LabelCollision(t));
            }
            out.push(self.position(t)?);
        }
        Ok(out)
    }

    /// Labels not in `subset`, in register order.
    pub fn complement(&self, subset: &[QubitLabel]) -> Vec<QubitLabel> {
        self.0
            .iter()
            .copied()
            .filter(|l| !subset.contains(l))
            .collect()
    }

    pub fn concat(&self, other: &Register) -> Result<Register> {
        let mut labels = self.0.clone();
        labels.extend_from_slice(&other.0);
        Register::new(labels)
    }
}

impl fmt::Display for Register {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_and_duplicates() {
        assert!(matches!(QubitLabel::new(0), Err(Error::InvalidLabel(0))));
        assert!(matches!(
            Register::from_indices(&[1, 2, 1]),
            Err(Error::LabelCollision(_))
        ));
        assert!(matches!(
            Register::from_indices(&[1, 2, 3, 4, 5, 6, 7, 8, 9]),
            Err(Error::RegisterTooLarge(9))
        ));
    }

    #[test]
    fn complement_keeps_register_order() {
        let r = Register::from_indices(&[3, 1, 2, 5]).unwrap();
        let c = r.complement(&labels([1, 5]));
        assert_eq!(c, labels([3, 2]).to_vec());
        assert_eq!(r.to_string(), "(3,1,2,5)");
    }
}
