use nalgebra::Schur;
use proptest::prelude::*;
use wnet::entmetrics::{concurrence, concurrence_expression, tangle_report, three_tangle_pure};
use wnet::qcore::{
    labels, pauli_y, CMatrix, CVector, DensityMatrix, PureState, Register, UnitaryOp, C64,
};
use wnet::wfamily::{w_m, WmParams};

/// Concurrence from the general (non-Hermitian) eigenvalues of `ρ ρ̃`.
fn schur_concurrence(rho: &DensityMatrix) -> f64 {
    let yy = pauli_y().kron(&pauli_y());
    let m = rho.matrix();
    let r = m * yy.matrix() * m.conjugate() * yy.matrix();
    let mut roots: Vec<f64> = Schur::new(r)
        .eigenvalues()
        .expect("complex Schur form is triangular")
        .iter()
        .map(|l| l.re.max(0.0).sqrt())
        .collect();
    roots.sort_by(|a, b| b.total_cmp(a));
    (roots[0] - roots[1] - roots[2] - roots[3]).max(0.0)
}

fn random_density(seed: &[f64], rank: usize) -> DensityMatrix {
    // ρ = A A† / Tr(A A†) with A a 4×rank complex matrix.
    let a = CMatrix::from_fn(4, rank, |i, j| {
        let k = 2 * (i * rank + j);
        C64::new(seed[k % seed.len()], seed[(k + 1) % seed.len()])
    });
    let m = &a * a.adjoint();
    let tr = m.trace();
    DensityMatrix::new(Register::from_indices(&[1, 2]).unwrap(), m / tr).unwrap()
}

fn random_local(seed: &[f64]) -> UnitaryOp {
    // exp-free construction: QR of a random complex 2×2 matrix.
    let m = CMatrix::from_fn(2, 2, |i, j| C64::new(seed[2 * i + j], seed[4 + 2 * i + j]));
    let q = m.qr().q();
    UnitaryOp::new(q).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn concurrence_matches_schur_route(seed in prop::collection::vec(-1.0f64..1.0, 32), rank in 1usize..=4) {
        let rho = random_density(&seed, rank);
        let a = concurrence(&rho).unwrap();
        // The Schur route loses half the digits on rank-deficient inputs.
        prop_assert!((a - schur_concurrence(&rho)).abs() < 1e-6, "{} vs {}", a, schur_concurrence(&rho));
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn concurrence_local_unitary_invariant(
        seed in prop::collection::vec(-1.0f64..1.0, 32),
        u1 in prop::collection::vec(-1.0f64..1.0, 8),
        u2 in prop::collection::vec(-1.0f64..1.0, 8),
    ) {
        prop_assume!(u1.iter().any(|x| x.abs() > 0.1) && u2.iter().any(|x| x.abs() > 0.1));
        let rho = random_density(&seed, 2);
        let [q1, q2] = labels([1, 2]);
        let moved = rho
            .apply_unitary(&random_local(&u1), &[q1]).unwrap()
            .apply_unitary(&random_local(&u2), &[q2]).unwrap();
        prop_assert!((concurrence(&rho).unwrap() - concurrence(&moved).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn pure_two_qubit_closed_form(re in prop::collection::vec(-1.0f64..1.0, 8)) {
        // For pure states C = 2|ad − bc|.
        let amps = CVector::from_fn(4, |i, _| C64::new(re[2 * i], re[2 * i + 1]));
        prop_assume!(amps.norm() > 0.1);
        let psi = PureState::normalized(Register::from_indices(&[1, 2]).unwrap(), amps).unwrap();
        let a = psi.amplitudes();
        let want = 2.0 * (a[0] * a[3] - a[1] * a[2]).norm();
        prop_assert!((concurrence(&psi.to_density()).unwrap() - want).abs() < 1e-10);
    }

    #[test]
    fn w_class_is_monogamous_with_equality(m in 0.0f64..50.0, g in -3.0f64..3.0, d in -3.0f64..3.0) {
        let psi = w_m(WmParams::new(m, g, d).unwrap());
        prop_assert!(three_tangle_pure(&psi).unwrap().abs() < 1e-10);
        let r = tangle_report(&psi.to_density()).unwrap();
        prop_assert!((r.tau_av - (r.tau_12 + r.tau_13 + r.tau_23) / 3.0).abs() < 1e-15);
    }
}

#[test]
fn signed_expression_goes_negative_when_separable() {
    let rho = DensityMatrix::maximally_mixed(&[1, 2]).unwrap();
    assert!((concurrence_expression(&rho).unwrap() + 0.5).abs() < 1e-12);
    assert_eq!(concurrence(&rho).unwrap(), 0.0);
}

#[test]
fn werner_family() {
    // F|Ψ−⟩⟨Ψ−| + (1−F)/3 (I − |Ψ−⟩⟨Ψ−|) has C = max(0, 2F − 1).
    let psi = wnet::wfamily::bell(wnet::wfamily::BellKind::PsiMinus).to_density();
    let id = CMatrix::identity(4, 4);
    for i in 0..=20 {
        let f = i as f64 / 20.0;
        let m = psi.matrix() * C64::new(f, 0.0)
            + (id.clone() - psi.matrix()) * C64::new((1.0 - f) / 3.0, 0.0);
        let rho = DensityMatrix::new(psi.register().clone(), m).unwrap();
        let want = (2.0 * f - 1.0).max(0.0);
        assert!((concurrence(&rho).unwrap() - want).abs() < 1e-12, "F={f}");
    }
}
