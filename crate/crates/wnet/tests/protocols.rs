use wnet::noise::{depolarizing_kraus, random_channel, ChainSpec, DepolarizingParam};
use wnet::protocols::{
    bsm_corrections, joint_corrections, protocol1, protocol2, protocol3, protocol3_deviation,
    superdense_wmod, teleport_wmod, verify_noise_commutation, OutcomePolicy, Pauli, Protocol2Mode,
    Protocol3Mode,
};
use wnet::qcore::{labels, MeasurementBasis, PureState, QuantumChannel, QubitLabel};
use wnet::wfamily::{basis_eta_zeta, bell_basis, bell_on, w_mod, BellKind};

fn dp(p: f64) -> DepolarizingParam {
    DepolarizingParam::new(p).unwrap()
}

/// Brute force: single Pauli on `target` mapping each occurring branch of
/// `state` measured in `basis` to `want` up to phase.
fn derive_corrections(
    state: &PureState,
    basis: &MeasurementBasis,
    target: QubitLabel,
    want: &PureState,
) -> Vec<(String, Pauli)> {
    let mut found = Vec::new();
    for outcome in state.measure(basis).unwrap() {
        let Some(post) = outcome.post_state else {
            continue;
        };
        let hit = Pauli::ALL.into_iter().find(|p| {
            let fixed = post.apply_unitary(&p.unitary(), &[target]).unwrap();
            let fixed = fixed.relabel(want.labels()).unwrap();
            (fixed.overlap(want).unwrap() - 1.0).abs() < 1e-12
        });
        found.push((outcome.label, hit.expect("some Pauli restores the target")));
    }
    found
}

#[test]
fn bsm_table_matches_brute_force() {
    let state = w_mod().tensor(&bell_on(BellKind::PhiPlus, 4, 5)).unwrap();
    let basis = bell_basis().on(&labels([3, 4])).unwrap();
    let derived = derive_corrections(&state, &basis, labels([5])[0], &w_mod());
    let table = bsm_corrections();
    assert_eq!(derived.len(), 4);
    for (label, pauli) in derived {
        let frozen = table.get(&label).unwrap().unitary();
        assert!(
            frozen.distance_up_to_phase(&pauli.unitary()) < 1e-12,
            "{label}"
        );
    }
}

#[test]
fn joint_table_matches_brute_force() {
    let state = w_mod()
        .tensor(&w_mod().relabel(&labels([4, 5, 6])).unwrap())
        .unwrap();
    let derived = derive_corrections(&state, &basis_eta_zeta(), labels([6])[0], &w_mod());
    let table = joint_corrections();
    assert_eq!(derived.len(), 4, "only the four used outcomes occur");
    for (label, pauli) in derived {
        let frozen = table.get(&label).unwrap().unitary();
        assert!(
            frozen.distance_up_to_phase(&pauli.unitary()) < 1e-12,
            "{label}"
        );
    }
}

#[test]
fn protocol1_matches_polynomial() {
    for i in 0..=20 {
        let p = i as f64 / 20.0;
        let f = protocol1([dp(p); 3], &w_mod()).unwrap().fidelity;
        let poly = 1.0 - 17.0 / 8.0 * p + 27.0 / 16.0 * p * p - 7.0 / 16.0 * p.powi(3);
        assert!((f - poly).abs() < 1e-12, "p={p}");
    }
}

#[test]
fn protocol2_postselected_branches_are_exact() {
    for hops in 1..=3 {
        let chain = ChainSpec::uniform(hops, dp(0.0)).unwrap();
        for kind in BellKind::ALL {
            let policy = OutcomePolicy::Postselect(kind.label().to_string());
            let r = protocol2(&chain, Protocol2Mode::Explicit, &policy).unwrap();
            assert!((r.fidelity - 1.0).abs() < 1e-12, "n={hops} {kind:?}");
            assert!((r.success_probability - 0.25f64.powi(hops as i32)).abs() < 1e-12);
        }
    }
}

#[test]
fn protocol2_modes_agree_on_grid() {
    for p in [0.0, 0.05, 0.1, 0.2] {
        for hops in [1, 2, 3, 5] {
            let chain = ChainSpec::uniform(hops, dp(p)).unwrap();
            let a = protocol2(&chain, Protocol2Mode::Explicit, &OutcomePolicy::Average).unwrap();
            let b = protocol2(&chain, Protocol2Mode::Effective, &OutcomePolicy::Average).unwrap();
            let dev = a.final_state.max_deviation(&b.final_state).unwrap();
            assert!(dev < 1e-10, "p={p} n={hops}: {dev:e}");
            let total: f64 = a.outcome_trace.iter().map(|s| s.probability).sum();
            assert!((total - hops as f64).abs() < 1e-10);
        }
    }
}

#[test]
fn protocol2_placement_insensitive() {
    // Same p_link (qubits 1, 2 see it too) and the same composed strength on
    // the routed line, once spread over every event and once carried by the
    // three storage events alone.
    let spread = ChainSpec::new(2, dp(0.1), dp(0.1), dp(0.1)).unwrap();
    let rest = 1.0 - (1.0 - spread.effective().value()) / 0.81;
    let p_mem = 1.0 - (1.0 - rest).powf(1.0 / 3.0);
    let memories_only = ChainSpec::new(2, dp(0.1), dp(p_mem), dp(0.0)).unwrap();
    let a = protocol2(&spread, Protocol2Mode::Explicit, &OutcomePolicy::Average).unwrap();
    let b = protocol2(
        &memories_only,
        Protocol2Mode::Explicit,
        &OutcomePolicy::Average,
    )
    .unwrap();
    let dev = a.final_state.max_deviation(&b.final_state).unwrap();
    assert!(dev < 1e-10, "{dev:e}");
}

#[test]
fn protocol2_tau12_independent_of_chain() {
    let base = ChainSpec::new(1, dp(0.1), dp(0.0), dp(0.0)).unwrap();
    let heavy = ChainSpec::new(3, dp(0.1), dp(0.4), dp(0.3)).unwrap();
    let a = protocol2(&base, Protocol2Mode::Effective, &OutcomePolicy::Average).unwrap();
    let b = protocol2(&heavy, Protocol2Mode::Effective, &OutcomePolicy::Average).unwrap();
    assert!((a.tangles.tau_12 - b.tangles.tau_12).abs() < 1e-14);
}

#[test]
fn protocol3_noiseless_explicit() {
    let r = protocol3(dp(0.0), Protocol3Mode::Explicit, &OutcomePolicy::Average).unwrap();
    assert!((r.fidelity - 1.0).abs() < 1e-12);
    assert!((r.success_probability - 1.0).abs() < 1e-12);
    for step in &r.outcome_trace {
        if step.correction.is_some() {
            assert!((step.probability - 0.25).abs() < 1e-12, "{}", step.label);
        } else {
            assert!(step.probability < 1e-12, "{}", step.label);
        }
    }
    assert!(protocol3_deviation(dp(0.0)).unwrap() < 1e-12);
}

#[test]
fn protocol3_explicit_full_noise_is_product() {
    // The conditional state at p = 1 is ρ₁₂ ⊗ I/2.
    let r = protocol3(dp(1.0), Protocol3Mode::Explicit, &OutcomePolicy::Average).unwrap();
    let rho = &r.final_state;
    let rho12 = rho.partial_trace(&labels([1, 2])).unwrap();
    let half = wnet::qcore::DensityMatrix::maximally_mixed(&[6]).unwrap();
    let product = rho12.tensor(&half).unwrap();
    assert!(rho.max_deviation(&product).unwrap() < 1e-12);
    assert!((r.success_probability - 0.5).abs() < 1e-12);
    assert!(protocol3_deviation(dp(1.0)).unwrap() > 1e-3);
}

#[test]
fn commutation_for_several_channels() {
    assert_eq!(
        verify_noise_commutation(&QuantumChannel::identity(1), 3, 1).unwrap(),
        0.0
    );
    let dev = verify_noise_commutation(&depolarizing_kraus(dp(0.3)), 5, 7).unwrap();
    assert!(dev < 1e-10);
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    let ch = random_channel(&mut rng, 3);
    assert!(verify_noise_commutation(&ch, 5, 8).unwrap() < 1e-10);
    assert!(verify_noise_commutation(&QuantumChannel::identity(2), 1, 0).is_err());
}

#[test]
fn teleport_plus_state_uniform() {
    let plus = PureState::from_real_kets(
        &[9],
        &[
            ("0", std::f64::consts::FRAC_1_SQRT_2),
            ("1", std::f64::consts::FRAC_1_SQRT_2),
        ],
    )
    .unwrap();
    let out = teleport_wmod(&plus).unwrap();
    assert!((out.fidelity() - 1.0).abs() < 1e-12);
    for b in &out.branches {
        if b.correction.is_some() {
            assert!((b.probability - 0.25).abs() < 1e-12);
        } else {
            assert!(b.probability < 1e-12);
        }
    }
}

#[test]
fn dense_code_eleven_lands_on_xi_minus() {
    let out = superdense_wmod(0b11).unwrap();
    assert_eq!(out.label, "xi-");
    assert_eq!(out.decoded, 0b11);
}
