use serde::Serialize;

use super::teleport_corrections;
use crate::qcore::{labels, PureState, PROBABILITY_FLOOR};
use crate::wfamily::{basis_eta_xi, eta_plus, teleport_basis, w_mod};
use crate::{Error, Result};

/// One sender outcome of a teleportation run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TeleportBranch {
    pub label: String,
    pub probability: f64,
    pub correction: Option<String>,
    /// Fidelity of the corrected receiver qubit with the input; `None` for
    /// outcomes that did not occur.
    pub fidelity: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TeleportOutcome {
    pub branches: Vec<TeleportBranch>,
}

impl TeleportOutcome {
    /// Worst fidelity over the branches that occurred.
    pub fn fidelity(&self) -> f64 {
        self.branches
            .iter()
            .filter_map(|b| b.fidelity)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Teleports a single-qubit state through `W_mod` shared as sender (1, 2)
/// and receiver 3. The input is relabeled to qubit 4; the sender measures
/// (4, 1, 2) in the teleportation basis and the receiver corrects qubit 3.
pub fn teleport_wmod(input: &PureState) -> Result<TeleportOutcome> {
    if input.num_qubits() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: input.num_qubits(),
        });
    }
    let [q3, q4] = labels([3, 4]);
    let input4 = input.relabel(&[q4])?;
    let full = input4.tensor(&w_mod())?;
    let table = teleport_corrections();
    let mut branches = Vec::new();
    for outcome in full.measure(&teleport_basis())? {
        let correction = table.get(&outcome.label);
        let fidelity = match (&outcome.post_state, correction) {
            (Some(post), Some(corr)) if outcome.probability > PROBABILITY_FLOOR => {
                let fixed = post.apply_unitary(&corr.unitary(), &[q3])?.relabel(&[q4])?;
                Some(fixed.overlap(&input4)?)
            }
            (Some(_), None) => {
                return Err(Error::Invariant(format!(
                    "teleportation outcome {} occurred with probability {:e}",
                    outcome.label, outcome.probability
                )));
            }
            _ => None,
        };
        branches.push(TeleportBranch {
            label: outcome.label,
            probability: outcome.probability,
            correction: correction.map(|c| c.name()),
            fidelity,
        });
    }
    Ok(TeleportOutcome { branches })
}

/// Result of one dense-coding round.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DenseCodeOutcome {
    pub sent: u8,
    pub decoded: u8,
    pub label: String,
    pub probability: f64,
}

const DENSE_CODE: [(&str, u8); 4] = [("eta+", 0b00), ("eta-", 0b01), ("xi+", 0b10), ("xi-", 0b11)];

/// Sends two classical bits through `|η+⟩` on (1, 2, 3): qubit 1 is encoded
/// with `I`, `Z`, `X` or `Z` then `X` for `00`, `01`, `10`, `11`, and the
/// receiver measures in the `η/ξ` basis.
pub fn superdense_wmod(bits: u8) -> Result<DenseCodeOutcome> {
    if bits > 0b11 {
        return Err(Error::domain("bits", bits as f64, "two bits (0..=3)"));
    }
    let q1 = labels([1]);
    let x = crate::qcore::pauli_x();
    let z = crate::qcore::pauli_z();
    let mut state = eta_plus(1.0)?;
    if bits & 0b01 != 0 {
        state = state.apply_unitary(&z, &q1)?;
    }
    if bits & 0b10 != 0 {
        state = state.apply_unitary(&x, &q1)?;
    }
    let best = state
        .measure(&basis_eta_xi(1.0)?)?
        .into_iter()
        .max_by(|a, b| a.probability.total_cmp(&b.probability))
        .expect("non-empty basis");
    let decoded = DENSE_CODE
        .iter()
        .find(|(l, _)| *l == best.label)
        .map(|&(_, v)| v)
        .ok_or_else(|| {
            Error::Invariant(format!("decoded onto completion vector {}", best.label))
        })?;
    Ok(DenseCodeOutcome {
        sent: bits,
        decoded,
        label: best.label,
        probability: best.probability,
    })
}
