use std::fmt;

use serde::Serialize;

use crate::qcore::{pauli_i, pauli_x, pauli_y, pauli_z, UnitaryOp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn unitary(self) -> UnitaryOp {
        match self {
            Pauli::I => pauli_i(),
            Pauli::X => pauli_x(),
            Pauli::Y => pauli_y(),
            Pauli::Z => pauli_z(),
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Pauli::I => "I",
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
        };
        f.write_str(s)
    }
}

/// Paulis applied in sequence, first element first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Correction(Vec<Pauli>);

impl Correction {
    pub fn new(ops: Vec<Pauli>) -> Self {
        Correction(ops)
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.0
    }

    /// Product unitary; the last Pauli of the sequence is the leftmost factor.
    pub fn unitary(&self) -> UnitaryOp {
        self.0.iter().fold(pauli_i(), |acc, p| &p.unitary() * &acc)
    }

    /// `"I"`, `"Z"`, `"X,Z"` (application order).
    pub fn name(&self) -> String {
        if self.0.is_empty() {
            return "I".to_string();
        }
        self.0
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Outcome label → correction on the protocol's designated target qubit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrectionTable {
    entries: Vec<(String, Correction)>,
}

impl CorrectionTable {
    pub fn new(entries: Vec<(String, Correction)>) -> Self {
        CorrectionTable { entries }
    }

    pub fn get(&self, label: &str) -> Option<&Correction> {
        self.entries
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, c)| c)
    }

    pub fn entries(&self) -> &[(String, Correction)] {
        &self.entries
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(l, _)| l.as_str())
    }
}

fn table(rows: &[(&str, &[Pauli])]) -> CorrectionTable {
    CorrectionTable::new(
        rows.iter()
            .map(|(l, ops)| (l.to_string(), Correction::new(ops.to_vec())))
            .collect(),
    )
}

/// Swap corrections on the far half of the Bell pair after a Bell
/// measurement of (carrier, near half): `Ψ−` takes X then Z, which equals
/// the required operator up to a global sign.
pub fn bsm_corrections() -> CorrectionTable {
    table(&[
        ("phi+", &[]),
        ("phi-", &[Pauli::Z]),
        ("psi+", &[Pauli::X]),
        ("psi-", &[Pauli::X, Pauli::Z]),
    ])
}

/// Corrections on qubit 6 after the joint `η/ζ` measurement on (3, 4, 5).
pub fn joint_corrections() -> CorrectionTable {
    table(&[
        ("eta+", &[]),
        ("eta-", &[Pauli::Z]),
        ("zeta+", &[Pauli::X]),
        ("zeta-", &[Pauli::Z, Pauli::X]),
    ])
}

/// Receiver corrections for teleportation through `W_mod`; same shape as the
/// Bell-measurement table.
pub fn teleport_corrections() -> CorrectionTable {
    bsm_corrections()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_order() {
        let xz = Correction::new(vec![Pauli::X, Pauli::Z]).unitary();
        let expected = &pauli_z() * &pauli_x();
        assert!(xz.distance_up_to_phase(&expected) < 1e-15);
        assert_eq!(Correction::new(vec![Pauli::X, Pauli::Z]).name(), "X,Z");
        assert_eq!(Correction::new(vec![]).name(), "I");
    }

    #[test]
    fn tables_cover_used_outcomes() {
        let labels: Vec<_> = bsm_corrections().labels().map(String::from).collect();
        assert_eq!(labels, ["phi+", "phi-", "psi+", "psi-"]);
        let labels: Vec<_> = joint_corrections().labels().map(String::from).collect();
        assert_eq!(labels, ["eta+", "eta-", "zeta+", "zeta-"]);
    }
}
