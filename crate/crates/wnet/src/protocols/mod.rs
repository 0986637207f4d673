//! The three distribution protocols, their Pauli-correction tables, the
//! noise/swap commutation check and the teleportation and dense-coding
//! tasks.
//!
//! Every protocol returns a [`ProtocolResult`] holding the three-qubit state
//! at the end nodes. Measurements are resolved by an [`OutcomePolicy`]:
//! averaging over corrected branches (the default, and deterministic) or
//! post-selecting one named branch.

mod commutation;
mod corrections;
mod distribution;
mod tasks;

pub use commutation::{random_w_class, swap_with_bell_pair, verify_noise_commutation};
pub use corrections::{
    bsm_corrections, joint_corrections, teleport_corrections, Correction, CorrectionTable, Pauli,
};
pub use distribution::{
    protocol1, protocol2, protocol2_effective, protocol3, protocol3_deviation,
    protocol3_explicit_state, Protocol2Mode, Protocol3Mode,
};
pub use tasks::{
    superdense_wmod, teleport_wmod, DenseCodeOutcome, TeleportBranch, TeleportOutcome,
};

use serde::Serialize;

use crate::entmetrics::{tangle_report, three_tangle, TangleReport};
use crate::qcore::{
    CMatrix, DensityMatrix, MeasurementBasis, PureState, QubitLabel, Register, C64,
    PROBABILITY_FLOOR,
};
use crate::{Error, Result};

/// How a measurement's outcomes are turned into a single state.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum OutcomePolicy {
    /// Probability-weighted sum of the corrected branches that have a
    /// correction, renormalized over those branches.
    #[default]
    Average,
    /// Keep only the named branch (at every measurement of the run).
    Postselect(String),
    /// Keep branch `path[i]` at the `i`-th measurement of the run.
    Path(Vec<String>),
}

impl OutcomePolicy {
    /// Branch kept at measurement `index`, or `None` when averaging.
    fn selected(&self, index: usize) -> Result<Option<&str>> {
        match self {
            OutcomePolicy::Average => Ok(None),
            OutcomePolicy::Postselect(label) => Ok(Some(label)),
            OutcomePolicy::Path(path) => {
                path.get(index).map(|l| Some(l.as_str())).ok_or_else(|| {
                    Error::UnknownOutcome(format!("no branch given for measurement {index}"))
                })
            }
        }
    }
}

/// One outcome of one measurement during a run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutcomeStep {
    pub stage: String,
    pub label: String,
    pub probability: f64,
    /// Correction applied, or `None` for discarded outcomes.
    pub correction: Option<String>,
}

#[derive(Clone, Debug)]
pub struct ProtocolResult {
    pub final_state: DensityMatrix,
    /// `⟨target|ρ|target⟩`, compared position by position.
    pub fidelity: f64,
    pub tangles: TangleReport,
    pub outcome_trace: Vec<OutcomeStep>,
    /// Probability that the run produced a kept outcome; 1 unless outcomes
    /// were discarded.
    pub success_probability: f64,
}

impl ProtocolResult {
    fn evaluate(
        final_state: DensityMatrix,
        target: &PureState,
        outcome_trace: Vec<OutcomeStep>,
        success_probability: f64,
    ) -> Result<Self> {
        let fidelity = final_state.fidelity(target)?;
        let mut tangles = tangle_report(&final_state)?;
        if (final_state.purity() - 1.0).abs() <= 1e-10 {
            tangles.tau_3 = Some(three_tangle(&final_state)?);
        }
        Ok(ProtocolResult {
            final_state,
            fidelity,
            tangles,
            outcome_trace,
            success_probability,
        })
    }
}

/// Measures `basis` on `rho`, corrects each branch on `target` with `table`
/// and combines the branches according to `policy`. Returns the combined
/// state on the unmeasured qubits and the probability of the kept outcomes.
#[allow(clippy::too_many_arguments)]
pub(crate) fn resolve_measurement(
    rho: &DensityMatrix,
    basis: &MeasurementBasis,
    table: &CorrectionTable,
    target: QubitLabel,
    policy: &OutcomePolicy,
    index: usize,
    stage: &str,
    trace: &mut Vec<OutcomeStep>,
) -> Result<(DensityMatrix, f64)> {
    let blocks = rho.project_each(basis)?;
    let selected = policy.selected(index)?;
    if let Some(label) = selected {
        if !blocks.iter().any(|(l, _, _)| l == label) {
            return Err(Error::UnknownOutcome(label.to_string()));
        }
    }
    let mut sum: Option<(Register, CMatrix)> = None;
    let mut kept = 0.0;
    for (label, probability, block) in blocks {
        let correction = table.get(&label);
        let keep = match selected {
            None => correction.is_some(),
            Some(want) => want == label,
        };
        trace.push(OutcomeStep {
            stage: stage.to_string(),
            label: label.clone(),
            probability,
            correction: correction.filter(|_| keep).map(|c| c.name()),
        });
        if !keep {
            continue;
        }
        let correction = correction.ok_or_else(|| Error::UnknownOutcome(label.clone()))?;
        let (reg, m) = block.expect("projection blocks are always present");
        let branch = DensityMatrix::from_parts(reg, m);
        let corrected = branch.apply_unitary(&correction.unitary(), &[target])?;
        kept += probability;
        match &mut sum {
            Some((_, acc)) => *acc += corrected.matrix(),
            None => sum = Some((corrected.register().clone(), corrected.matrix().clone())),
        }
    }
    let (reg, m) = sum.ok_or_else(|| Error::Invariant(format!("{stage}: no outcome kept")))?;
    if kept <= PROBABILITY_FLOOR {
        return Err(Error::Invariant(format!(
            "{stage}: kept outcomes have probability {kept:e}"
        )));
    }
    Ok((
        DensityMatrix::from_parts(reg, m * C64::new(1.0 / kept, 0.0)),
        kept,
    ))
}
