//! The `W_m` family, reference states, preparation unitaries and W-class
//! measurement bases.
//!
//! `W_m = (|100⟩ + √m e^{iγ}|010⟩ + √(m+1) e^{iδ}|001⟩) / √(2+2m)`. Every
//! member carries one ebit across the `12|3` cut; `m = 1` with zero phases is
//! `W_mod = ½|100⟩ + ½|010⟩ + 1/√2|001⟩`.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::qcore::{c, labels, CVector, MeasurementBasis, PureState, UnitaryOp, C64};
use crate::{Error, Result};

/// Parameters of the `W_m` family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WmParams {
    m: f64,
    gamma: f64,
    delta: f64,
}

impl WmParams {
    pub fn new(m: f64, gamma: f64, delta: f64) -> Result<Self> {
        if !(m >= 0.0) || !m.is_finite() {
            return Err(Error::domain("m", m, "m >= 0"));
        }
        if !gamma.is_finite() {
            return Err(Error::domain("gamma", gamma, "finite"));
        }
        if !delta.is_finite() {
            return Err(Error::domain("delta", delta, "finite"));
        }
        Ok(WmParams { m, gamma, delta })
    }

    /// Zero phases.
    pub fn real(m: f64) -> Result<Self> {
        WmParams::new(m, 0.0, 0.0)
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

impl Default for WmParams {
    fn default() -> Self {
        WmParams {
            m: 1.0,
            gamma: 0.0,
            delta: 0.0,
        }
    }
}

fn checked_m(m: f64) -> Result<f64> {
    WmParams::real(m).map(|p| p.m)
}

/// `W_m` on qubits (1, 2, 3).
pub fn w_m(params: WmParams) -> PureState {
    let WmParams { m, gamma, delta } = params;
    let norm = (2.0 + 2.0 * m).sqrt();
    PureState::normalized_from_kets(
        &[1, 2, 3],
        &[
            ("100", c(1.0 / norm)),
            ("010", C64::from_polar(m.sqrt() / norm, gamma)),
            ("001", C64::from_polar((m + 1.0).sqrt() / norm, delta)),
        ],
    )
}

/// `½|100⟩ + ½|010⟩ + 1/√2|001⟩` on (1, 2, 3).
pub fn w_mod() -> PureState {
    w_m(WmParams::default())
}

/// `(|100⟩ + |010⟩ + |001⟩)/√3` on (1, 2, 3).
pub fn w_canonical() -> PureState {
    let a = 1.0 / 3f64.sqrt();
    PureState::normalized_from_kets(&[1, 2, 3], &[("100", c(a)), ("010", c(a)), ("001", c(a))])
}

/// `(|000⟩ + |111⟩)/√2` on (1, 2, 3).
pub fn ghz() -> PureState {
    PureState::normalized_from_kets(
        &[1, 2, 3],
        &[("000", c(FRAC_1_SQRT_2)), ("111", c(FRAC_1_SQRT_2))],
    )
}

/// `|0⟩₁ ⊗ |Ψ+⟩₂₃`, the `m → ∞` limit of `W_m`.
pub fn w_m_limit() -> PureState {
    PureState::normalized_from_kets(
        &[1, 2, 3],
        &[("010", c(FRAC_1_SQRT_2)), ("001", c(FRAC_1_SQRT_2))],
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PhiMinus,
        BellKind::PsiPlus,
        BellKind::PsiMinus,
    ];

    pub fn label(self) -> &'static str {
        match self {
            BellKind::PhiPlus => "phi+",
            BellKind::PhiMinus => "phi-",
            BellKind::PsiPlus => "psi+",
            BellKind::PsiMinus => "psi-",
        }
    }

    fn amplitudes(self) -> [f64; 4] {
        let h = FRAC_1_SQRT_2;
        match self {
            BellKind::PhiPlus => [h, 0.0, 0.0, h],
            BellKind::PhiMinus => [h, 0.0, 0.0, -h],
            BellKind::PsiPlus => [0.0, h, h, 0.0],
            BellKind::PsiMinus => [0.0, h, -h, 0.0],
        }
    }
}

/// Bell state on qubits (1, 2).
pub fn bell(kind: BellKind) -> PureState {
    bell_on(kind, 1, 2)
}

/// Bell state on qubits (a, b).
pub fn bell_on(kind: BellKind, a: u32, b: u32) -> PureState {
    let amps = kind.amplitudes();
    let terms: Vec<(&str, C64)> = ["00", "01", "10", "11"]
        .into_iter()
        .zip(amps)
        .map(|(k, a)| (k, c(a)))
        .collect();
    PureState::normalized_from_kets(&[a, b], &terms)
}

/// `|Φ+⟩₁₃ ⊗ |0⟩₂ = (|000⟩ + |101⟩)/√2` in order (1, 2, 3): the input of
/// every preparation unitary.
pub fn preparation_seed() -> PureState {
    PureState::normalized_from_kets(
        &[1, 2, 3],
        &[("000", c(FRAC_1_SQRT_2)), ("101", c(FRAC_1_SQRT_2))],
    )
}

fn mw_matrix(m: f64, basis_variant: bool) -> UnitaryOp {
    let a = (m / (m + 1.0)).sqrt();
    let b = 1.0 / (m + 1.0).sqrt();
    // Rows 0 and 3 differ between the state and basis variants.
    let (r0, r3) = if basis_variant {
        ([0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0])
    } else {
        ([0.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 0.0])
    };
    let rows = [
        r0[0], r0[1], r0[2], r0[3], a, 0.0, 0.0, b, b, 0.0, 0.0, -a, r3[0], r3[1], r3[2], r3[3],
    ];
    UnitaryOp::from_real_rows(4, &rows).expect("preparation matrix is orthogonal")
}

/// Two-qubit unitary that maps the preparation seed to `W_mod` when applied
/// on qubits (1, 2).
pub fn u_mw() -> UnitaryOp {
    mw_matrix(1.0, false)
}

/// Two-qubit unitary that maps the preparation seed to `|η+⟩` when applied
/// on qubits (2, 3).
pub fn u_mwb() -> UnitaryOp {
    mw_matrix(1.0, true)
}

/// General-`m` version of [`u_mw`]; produces `W_m` with zero phases.
pub fn u_mwm(m: f64) -> Result<UnitaryOp> {
    Ok(mw_matrix(checked_m(m)?, false))
}

/// General-`m` version of [`u_mwb`]; produces `|η+_m⟩`.
pub fn u_mwmb(m: f64) -> Result<UnitaryOp> {
    Ok(mw_matrix(checked_m(m)?, true))
}

/// `|η+_m⟩ = (|010⟩ + √m|001⟩ + √(m+1)|100⟩)/√(2+2m)` on (1, 2, 3).
pub fn eta_plus(m: f64) -> Result<PureState> {
    let m = checked_m(m)?;
    let norm = (2.0 + 2.0 * m).sqrt();
    Ok(PureState::normalized_from_kets(
        &[1, 2, 3],
        &[
            ("010", c(1.0 / norm)),
            ("001", c(m.sqrt() / norm)),
            ("100", c((m + 1.0).sqrt() / norm)),
        ],
    ))
}

fn apply_on_first(psi: &PureState, u: &UnitaryOp) -> PureState {
    psi.apply_unitary(u, &labels([1]))
        .expect("qubit 1 is in the register")
}

/// `{η±_m, ξ±_m}` on (1, 2, 3): `η− = Z₁η+`, `ξ+ = X₁η+`, `ξ− = X₁Z₁η+`,
/// completed to eight vectors.
pub fn basis_eta_xi(m: f64) -> Result<MeasurementBasis> {
    let eta = eta_plus(m)?;
    let z = crate::qcore::pauli_z();
    let x = crate::qcore::pauli_x();
    let eta_minus = apply_on_first(&eta, &z);
    let xi_plus = apply_on_first(&eta, &x);
    let xi_minus = apply_on_first(&eta_minus, &x);
    MeasurementBasis::completed(
        labels([1, 2, 3]).to_vec(),
        vec![
            ("eta+".into(), eta.amplitudes().clone()),
            ("eta-".into(), eta_minus.amplitudes().clone()),
            ("xi+".into(), xi_plus.amplitudes().clone()),
            ("xi-".into(), xi_minus.amplitudes().clone()),
        ],
    )
}

fn ket_vector(terms: &[(&str, f64)]) -> CVector {
    PureState::normalized_from_kets(
        &[1, 2, 3],
        &terms.iter().map(|&(k, a)| (k, c(a))).collect::<Vec<_>>(),
    )
    .amplitudes()
    .clone()
}

/// Joint-measurement basis on (3, 4, 5):
/// `η± = ½|010⟩ + ½|001⟩ ± 1/√2|100⟩`, `ζ± = ½|110⟩ + ½|101⟩ ± 1/√2|000⟩`,
/// completed to eight vectors.
pub fn basis_eta_zeta() -> MeasurementBasis {
    let h = FRAC_1_SQRT_2;
    let primary = vec![
        (
            "eta+".to_string(),
            ket_vector(&[("010", 0.5), ("001", 0.5), ("100", h)]),
        ),
        (
            "eta-".to_string(),
            ket_vector(&[("010", 0.5), ("001", 0.5), ("100", -h)]),
        ),
        (
            "zeta+".to_string(),
            ket_vector(&[("110", 0.5), ("101", 0.5), ("000", h)]),
        ),
        (
            "zeta-".to_string(),
            ket_vector(&[("110", 0.5), ("101", 0.5), ("000", -h)]),
        ),
    ];
    MeasurementBasis::completed(labels([3, 4, 5]).to_vec(), primary)
        .expect("eta/zeta vectors are orthonormal")
}

/// Sender's measurement for teleportation through `W_mod`, on (input, 1, 2)
/// with the input qubit labeled 4.
///
/// Writing `W_mod = (|ψ₀⟩₁₂|0⟩₃ + |ψ₁⟩₁₂|1⟩₃)/√2` with `ψ₀ = (|10⟩+|01⟩)/√2`
/// and `ψ₁ = |00⟩`, the four used vectors are the Bell combinations
/// `(|0⟩|ψ₀⟩ ± |1⟩|ψ₁⟩)/√2` (`phi±`) and `(|0⟩|ψ₁⟩ ± |1⟩|ψ₀⟩)/√2` (`psi±`).
pub fn teleport_basis() -> MeasurementBasis {
    let h = FRAC_1_SQRT_2;
    let q = 0.5;
    // |0⟩|ψ₀⟩ = (|010⟩ + |001⟩)/√2, |1⟩|ψ₁⟩ = |100⟩,
    // |0⟩|ψ₁⟩ = |000⟩, |1⟩|ψ₀⟩ = (|110⟩ + |101⟩)/√2.
    let primary = vec![
        (
            "phi+".to_string(),
            ket_vector(&[("010", q), ("001", q), ("100", h)]),
        ),
        (
            "phi-".to_string(),
            ket_vector(&[("010", q), ("001", q), ("100", -h)]),
        ),
        (
            "psi+".to_string(),
            ket_vector(&[("000", h), ("110", q), ("101", q)]),
        ),
        (
            "psi-".to_string(),
            ket_vector(&[("000", h), ("110", -q), ("101", -q)]),
        ),
    ];
    MeasurementBasis::completed(labels([4, 1, 2]).to_vec(), primary)
        .expect("teleportation vectors are orthonormal")
}

/// Bell basis on (1, 2), outcomes `phi+`, `phi-`, `psi+`, `psi-`.
pub fn bell_basis() -> MeasurementBasis {
    MeasurementBasis::new(
        labels([1, 2]).to_vec(),
        BellKind::ALL
            .iter()
            .map(|k| (k.label().to_string(), bell(*k).amplitudes().clone()))
            .collect(),
    )
    .expect("Bell basis is orthonormal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{pauli_x, pauli_z};

    #[test]
    fn w_m_at_zero() {
        let s = w_m(WmParams::real(0.0).unwrap());
        let want = PureState::from_real_kets(
            &[1, 2, 3],
            &[("100", FRAC_1_SQRT_2), ("001", FRAC_1_SQRT_2)],
        )
        .unwrap();
        assert!(s.approx_eq(&want, 1e-15));
    }

    #[test]
    fn negative_m_is_a_domain_error() {
        assert!(matches!(WmParams::real(-0.1), Err(Error::Domain { .. })));
        assert!(u_mwm(-1.0).is_err());
        assert!(u_mwmb(-1.0).is_err());
        assert!(WmParams::real(f64::NAN).is_err());
    }

    #[test]
    fn phases_enter_the_amplitudes() {
        let s = w_m(WmParams::new(1.0, 0.3, -1.2).unwrap());
        assert!((s.amplitude("010").unwrap().arg() - 0.3).abs() < 1e-14);
        assert!((s.amplitude("001").unwrap().arg() + 1.2).abs() < 1e-14);
        assert!(s.eq_up_to_phase(&s, 1e-14));
    }

    #[test]
    fn reference_states() {
        let a = 1.0 / 3f64.sqrt();
        assert!((w_canonical().amplitude("010").unwrap().re - a).abs() < 1e-15);
        assert!((ghz().amplitude("111").unwrap().re - FRAC_1_SQRT_2).abs() < 1e-15);
        let phi = bell(BellKind::PhiPlus);
        assert!((phi.amplitude("11").unwrap().re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(w_mod().approx_eq(
            &PureState::from_real_kets(
                &[1, 2, 3],
                &[("100", 0.5), ("010", 0.5), ("001", FRAC_1_SQRT_2)]
            )
            .unwrap(),
            1e-15
        ));
    }

    #[test]
    fn u_mwm_at_one_is_u_mw() {
        assert_eq!(u_mwm(1.0).unwrap(), u_mw());
        assert_eq!(u_mwmb(1.0).unwrap(), u_mwb());
    }

    #[test]
    fn z_on_eta_plus_gives_eta_minus() {
        let basis = basis_eta_xi(1.0).unwrap();
        let eta = basis.state("eta+").unwrap();
        let flipped = eta.apply_unitary(&pauli_z(), &labels([1])).unwrap();
        assert!(flipped.approx_eq(&basis.state("eta-").unwrap(), 1e-15));
        let xz = eta
            .apply_unitary(&pauli_z(), &labels([1]))
            .unwrap()
            .apply_unitary(&pauli_x(), &labels([1]))
            .unwrap();
        assert!(xz.approx_eq(&basis.state("xi-").unwrap(), 1e-15));
    }

    #[test]
    fn bases_have_expected_labels() {
        let labels: Vec<_> = basis_eta_zeta().labels().map(str::to_string).collect();
        assert_eq!(&labels[..4], ["eta+", "eta-", "zeta+", "zeta-"]);
        assert_eq!(teleport_basis().len(), 8);
        assert_eq!(bell_basis().len(), 4);
    }
}
