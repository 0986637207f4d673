use super::{
    bsm_corrections, joint_corrections, resolve_measurement, OutcomePolicy, OutcomeStep,
    ProtocolResult,
};
use crate::noise::{depolarize, depolarize_all, ChainSpec, DepolarizingParam};
use crate::qcore::{c, labels, CMatrix, DensityMatrix, PureState, QubitLabel, Register};
use crate::wfamily::{basis_eta_zeta, bell_basis, bell_on, w_mod, BellKind};
use crate::{Error, Result};

/// Direct transmission: qubit `i` of `state` passes through a depolarizing
/// channel of strength `ps[i]`. Fidelity is taken with respect to `state`.
pub fn protocol1(ps: [DepolarizingParam; 3], state: &PureState) -> Result<ProtocolResult> {
    if state.num_qubits() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: state.num_qubits(),
        });
    }
    let rho = depolarize_all(&state.to_density(), &ps)?;
    ProtocolResult::evaluate(rho, state, Vec::new(), 1.0)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Protocol2Mode {
    /// Hop-by-hop simulation with every noise event placed on its qubit.
    #[default]
    Explicit,
    /// Ideal state with one composed depolarizing channel on the routed
    /// qubit.
    Effective,
}

/// Label of the routed qubit after `hops` swaps: `2n + 3`.
fn remote_label(hops: u32) -> QubitLabel {
    QubitLabel::new(2 * hops + 3).expect("positive label")
}

/// Repeater-chain distribution of `W_mod`: qubits 1 and 2 travel one link
/// each, qubit 3 is swapped across `n` hops.
///
/// Hop `k` uses the Bell pair `(2k+2, 2k+3)` created at the node holding the
/// carrier. Noise per hop: a storage event on the carrier, a storage event
/// on the near half for `k ≥ 2` (the repeater's second memory), a link event
/// on the far half and a gate event on the carrier just before an ideal Bell
/// measurement of (carrier, near half). The result is over `(1, 2, 2n+3)`.
pub fn protocol2(
    chain: &ChainSpec,
    mode: Protocol2Mode,
    policy: &OutcomePolicy,
) -> Result<ProtocolResult> {
    let remote = remote_label(chain.hops());
    if mode == Protocol2Mode::Effective {
        return protocol2_effective(chain.p_link, chain.effective(), remote);
    }
    let target = w_mod();
    let [q1, q2, q3] = labels([1, 2, 3]);
    let mut rho = target.to_density();
    rho = depolarize(&rho, q1, chain.p_link)?;
    rho = depolarize(&rho, q2, chain.p_link)?;
    let mut trace = Vec::new();
    let mut success = 1.0;
    let mut carrier = q3;
    for k in 1..=chain.hops() {
        let near = QubitLabel::new(2 * k + 2)?;
        let far = QubitLabel::new(2 * k + 3)?;
        rho = depolarize(&rho, carrier, chain.p_mem)?;
        let pair = bell_on(BellKind::PhiPlus, near.index(), far.index()).to_density();
        rho = rho.tensor(&pair)?;
        if k >= 2 {
            rho = depolarize(&rho, near, chain.p_mem)?;
        }
        rho = depolarize(&rho, far, chain.p_link)?;
        rho = depolarize(&rho, carrier, chain.p_bsm)?;
        let (next, kept) = swap_step(
            &rho,
            [carrier, near, far],
            policy,
            k as usize - 1,
            &format!("hop {k}"),
            &mut trace,
        )?;
        rho = next;
        success *= kept;
        carrier = far;
    }
    ProtocolResult::evaluate(rho, &target, trace, success)
}

/// Effective-mode Protocol 2 with free parameters: `p_link` on qubits 1 and
/// 2, `p_eff` on the routed qubit, which is labeled `remote`.
pub fn protocol2_effective(
    p_link: DepolarizingParam,
    p_eff: DepolarizingParam,
    remote: QubitLabel,
) -> Result<ProtocolResult> {
    let target = w_mod();
    let rho = depolarize_all(&target.to_density(), &[p_link, p_link, p_eff])?;
    let [q1, q2] = labels([1, 2]);
    ProtocolResult::evaluate(rho.relabel(&[q1, q2, remote])?, &target, Vec::new(), 1.0)
}

/// Bell measurement of `(carrier, near)` with the swap corrections on `far`.
pub(crate) fn swap_step(
    rho: &DensityMatrix,
    [carrier, near, far]: [QubitLabel; 3],
    policy: &OutcomePolicy,
    index: usize,
    stage: &str,
    trace: &mut Vec<OutcomeStep>,
) -> Result<(DensityMatrix, f64)> {
    let basis = bell_basis().on(&[carrier, near])?;
    resolve_measurement(
        rho,
        &basis,
        &bsm_corrections(),
        far,
        policy,
        index,
        stage,
        trace,
    )
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Protocol3Mode {
    /// `β³|W_mod⟩⟨W_mod| + (1 − β³) I/8` with `β = 1 − 3p/4`.
    #[default]
    Analytic,
    /// Two `W_mod` states, noise on (3, 4, 5), joint measurement and
    /// correction on 6.
    Explicit,
}

fn analytic_state(p_eff: DepolarizingParam) -> DensityMatrix {
    let beta = 1.0 - 0.75 * p_eff.value();
    let b3 = beta.powi(3);
    let w = w_mod().relabel(&labels([1, 2, 6])).expect("three labels");
    let pure = w.to_density();
    let m = pure.matrix() * c(b3) + CMatrix::identity(8, 8) * c((1.0 - b3) / 8.0);
    DensityMatrix::from_parts(pure.register().clone(), m)
}

/// Explicit joint-measurement run: returns the state on (1, 2, 6), the
/// probability of the four used outcomes, and the outcome trace.
pub fn protocol3_explicit_state(
    p_eff: DepolarizingParam,
    policy: &OutcomePolicy,
) -> Result<(DensityMatrix, f64, Vec<OutcomeStep>)> {
    let left = w_mod();
    let right = w_mod().relabel(&labels([4, 5, 6]))?;
    let mut rho = left.tensor(&right)?.to_density();
    for q in labels([3, 4, 5]) {
        rho = depolarize(&rho, q, p_eff)?;
    }
    let mut trace = Vec::new();
    let (state, kept) = resolve_measurement(
        &rho,
        &basis_eta_zeta(),
        &joint_corrections(),
        QubitLabel::new(6)?,
        policy,
        0,
        "joint",
        &mut trace,
    )?;
    debug_assert_eq!(state.register(), &Register::from_indices(&[1, 2, 6])?);
    Ok((state, kept, trace))
}

/// Joint-measurement distribution of `W_mod` to the end nodes (1, 2, 6).
///
/// Analytic mode ignores `policy`. Explicit mode discards the four
/// completion outcomes of the measurement basis, so its
/// `success_probability` falls below 1 once `p_eff > 0`.
pub fn protocol3(
    p_eff: DepolarizingParam,
    mode: Protocol3Mode,
    policy: &OutcomePolicy,
) -> Result<ProtocolResult> {
    let target = w_mod();
    match mode {
        Protocol3Mode::Analytic => {
            ProtocolResult::evaluate(analytic_state(p_eff), &target, Vec::new(), 1.0)
        }
        Protocol3Mode::Explicit => {
            let (state, kept, trace) = protocol3_explicit_state(p_eff, policy)?;
            ProtocolResult::evaluate(state, &target, trace, kept)
        }
    }
}

/// Largest elementwise gap between the explicit (averaged) and analytic
/// joint-measurement states.
pub fn protocol3_deviation(p_eff: DepolarizingParam) -> Result<f64> {
    let (explicit, _, _) = protocol3_explicit_state(p_eff, &OutcomePolicy::Average)?;
    explicit.max_deviation(&analytic_state(p_eff))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dp(p: f64) -> DepolarizingParam {
        DepolarizingParam::new(p).unwrap()
    }

    #[test]
    fn protocol1_endpoints() {
        let r = protocol1([dp(0.0); 3], &w_mod()).unwrap();
        assert!((r.fidelity - 1.0).abs() < 1e-12);
        let r = protocol1([dp(1.0); 3], &w_mod()).unwrap();
        assert!((r.fidelity - 0.125).abs() < 1e-12);
    }

    #[test]
    fn protocol2_noiseless_single_hop() {
        let chain = ChainSpec::uniform(1, dp(0.0)).unwrap();
        let r = protocol2(&chain, Protocol2Mode::Explicit, &OutcomePolicy::Average).unwrap();
        assert!((r.fidelity - 1.0).abs() < 1e-12);
        assert_eq!(
            r.final_state.register(),
            &Register::from_indices(&[1, 2, 5]).unwrap()
        );
        assert_eq!(r.outcome_trace.len(), 4);
        for step in &r.outcome_trace {
            assert!((step.probability - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn protocol3_analytic_full_noise() {
        let r = protocol3(dp(1.0), Protocol3Mode::Analytic, &OutcomePolicy::Average).unwrap();
        // β = 1/4: fidelity = 1/64 + (63/64)/8
        assert!((r.fidelity - (1.0 / 64.0 + 63.0 / 512.0)).abs() < 1e-12);
    }

    #[test]
    fn unknown_postselect_label() {
        let chain = ChainSpec::uniform(1, dp(0.0)).unwrap();
        let err = protocol2(
            &chain,
            Protocol2Mode::Explicit,
            &OutcomePolicy::Postselect("nope".into()),
        );
        assert!(matches!(err, Err(Error::UnknownOutcome(_))));
    }
}
