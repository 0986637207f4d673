use proptest::prelude::*;
use wnet::noise::{compose_depolarizing, depolarize, depolarize_all, DepolarizingParam};
use wnet::qcore::{labels, CVector, DensityMatrix, PureState, QubitLabel, Register, C64};
use wnet::Error;

fn state_from(seed: &[f64], n: usize) -> PureState {
    let dim = 1 << n;
    let amps = CVector::from_fn(dim, |i, _| C64::new(seed[2 * i] + 0.01, seed[2 * i + 1]));
    let reg = Register::from_indices(&(1..=n as u32).collect::<Vec<_>>()).unwrap();
    PureState::normalized(reg, amps).unwrap()
}

fn dp(p: f64) -> DepolarizingParam {
    DepolarizingParam::new(p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partial_trace_keeps_trace_and_positivity(seed in prop::collection::vec(-1.0f64..1.0, 16)) {
        let rho = state_from(&seed, 3).to_density();
        for keep in [&[1u32][..], &[2, 3], &[3, 1], &[]] {
            let keep: Vec<QubitLabel> = keep.iter().map(|&k| QubitLabel::new(k).unwrap()).collect();
            let red = rho.partial_trace(&keep).unwrap();
            prop_assert!((red.trace() - 1.0).abs() < 1e-12);
            prop_assert!(red.validate().is_ok());
        }
    }

    #[test]
    fn nested_partial_traces_commute(seed in prop::collection::vec(-1.0f64..1.0, 16)) {
        let rho = state_from(&seed, 3).to_density();
        let direct = rho.partial_trace(&labels([1])).unwrap();
        let staged = rho.partial_trace(&labels([1, 2])).unwrap().partial_trace(&labels([1])).unwrap();
        prop_assert!(direct.max_deviation(&staged).unwrap() < 1e-14);
    }

    #[test]
    fn permute_round_trip(seed in prop::collection::vec(-1.0f64..1.0, 16)) {
        let psi = state_from(&seed, 3);
        let moved = psi.permute(&labels([3, 1, 2])).unwrap();
        let back = moved.permute(&labels([1, 2, 3])).unwrap();
        prop_assert!(back.approx_eq(&psi, 1e-15));
        let rho = psi.to_density();
        let moved_rho = rho.permute(&labels([3, 1, 2])).unwrap();
        prop_assert!(moved_rho.max_deviation(&moved.to_density()).unwrap() < 1e-15);
    }

    #[test]
    fn depolarizing_composes(seed in prop::collection::vec(-1.0f64..1.0, 16), a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let rho = state_from(&seed, 3).to_density();
        let q2 = labels([2])[0];
        let twice = depolarize(&depolarize(&rho, q2, dp(a)).unwrap(), q2, dp(b)).unwrap();
        let once = depolarize(&rho, q2, compose_depolarizing(&[dp(a), dp(b)])).unwrap();
        prop_assert!(twice.max_deviation(&once).unwrap() < 1e-12);
        prop_assert!(twice.validate().is_ok());
    }

    #[test]
    fn depolarizing_is_affine_mixture(seed in prop::collection::vec(-1.0f64..1.0, 16), p in 0.0f64..=1.0) {
        // E_p(ρ) = (1 − p) ρ + p ρ_rest ⊗ I/2 on the noisy qubit.
        let rho = state_from(&seed, 2).to_density();
        let [q1, q2] = labels([1, 2]);
        let noisy = depolarize(&rho, q2, dp(p)).unwrap();
        let rest = rho.partial_trace(&[q1]).unwrap();
        let mixed = rest.tensor(&DensityMatrix::maximally_mixed(&[2]).unwrap()).unwrap();
        let want = DensityMatrix::mixture(&[(1.0 - p, &rho), (p, &mixed)]).unwrap();
        prop_assert!(noisy.max_deviation(&want).unwrap() < 1e-12);
    }

    #[test]
    fn full_noise_gives_maximally_mixed(seed in prop::collection::vec(-1.0f64..1.0, 16)) {
        let rho = state_from(&seed, 3).to_density();
        let out = depolarize_all(&rho, &[dp(1.0); 3]).unwrap();
        let want = DensityMatrix::maximally_mixed(&[1, 2, 3]).unwrap();
        prop_assert!(out.max_deviation(&want).unwrap() < 1e-14);
    }
}

#[test]
fn big_endian_ordering() {
    let psi = PureState::basis(&[1, 2, 3], "100").unwrap();
    assert_eq!(psi.amplitudes()[4], C64::new(1.0, 0.0));
}

#[test]
fn oversized_register_rejected() {
    let idx: Vec<u32> = (1..=9).collect();
    assert!(matches!(
        Register::from_indices(&idx),
        Err(Error::RegisterTooLarge(9))
    ));
}

#[test]
fn label_collision_rejected() {
    let a = PureState::basis(&[1, 2], "00").unwrap();
    assert!(matches!(a.tensor(&a), Err(Error::LabelCollision(_))));
}
