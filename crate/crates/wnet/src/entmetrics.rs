//! Entanglement monotones and threshold searches.
//!
//! Concurrence follows Wootters: `C = max{0, √λ₁ − √λ₂ − √λ₃ − √λ₄}` with
//! `λᵢ` the descending eigenvalues of `ρ (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`. The `√λᵢ`
//! are obtained directly as the singular values of `τ = W† (σ_y⊗σ_y) W*`,
//! where the columns of `W` are the eigenvectors of `ρ` scaled by the square
//! roots of their eigenvalues. Taking singular values instead of square
//! roots of eigenvalues keeps rank-deficient states (all reduced states of
//! pure states) accurate to machine precision.

use serde::Serialize;

use crate::qcore::linalg::weighted_eigenvectors;
use crate::qcore::{pauli_y, DensityMatrix, PureState, QubitLabel};
use crate::{Error, Result};

/// A metric is treated as vanished at or below this value.
pub const VANISH_TOL: f64 = 1e-9;
/// Default bisection / golden-section tolerance on the noise parameter.
pub const DEFAULT_SEARCH_TOL: f64 = 1e-4;

fn require_qubits(rho: &DensityMatrix, n: usize) -> Result<()> {
    if rho.num_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: 1 << n,
            got: rho.dim(),
        });
    }
    Ok(())
}

/// Eigenvalues of `ρ` below this are round-off and dropped from `W`.
const RANK_CUTOFF: f64 = 1e-14;

/// Square roots of the spectrum of `ρ ρ̃`, descending.
fn wootters_roots(rho: &DensityMatrix) -> Result<[f64; 4]> {
    require_qubits(rho, 2)?;
    let yy = pauli_y().kron(&pauli_y());
    let w = weighted_eigenvectors(rho.matrix(), RANK_CUTOFF);
    let tau = w.adjoint() * yy.matrix() * w.conjugate();
    let mut sv: Vec<f64> = tau.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let mut roots = [0.0; 4];
    for (r, s) in roots.iter_mut().zip(sv) {
        *r = s;
    }
    Ok(roots)
}

/// `√λ₁ − √λ₂ − √λ₃ − √λ₄` before the `max{0, ·}`; negative once the pair is
/// separable. Threshold searches use this signed value.
pub fn concurrence_expression(rho: &DensityMatrix) -> Result<f64> {
    let r = wootters_roots(rho)?;
    Ok(r[0] - r[1] - r[2] - r[3])
}

/// Wootters concurrence of a two-qubit state.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    Ok(concurrence_expression(rho)?.clamp(0.0, 1.0))
}

/// `C²`.
pub fn two_tangle(rho: &DensityMatrix) -> Result<f64> {
    Ok(concurrence(rho)?.powi(2))
}

/// Pairwise two-tangles of a three-qubit state, named by register position:
/// `tau_12` is positions (0, 1), `tau_13` positions (0, 2), `tau_23`
/// positions (1, 2).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TangleReport {
    pub tau_12: f64,
    pub tau_13: f64,
    pub tau_23: f64,
    pub tau_av: f64,
    /// Residual three-tangle; only defined for pure states.
    pub tau_3: Option<f64>,
}

fn pairs(rho: &DensityMatrix) -> Result<[[QubitLabel; 2]; 3]> {
    require_qubits(rho, 3)?;
    let l = rho.labels();
    Ok([[l[0], l[1]], [l[0], l[2]], [l[1], l[2]]])
}

pub fn tangle_report(rho: &DensityMatrix) -> Result<TangleReport> {
    let mut taus = [0.0; 3];
    for (t, pair) in taus.iter_mut().zip(pairs(rho)?) {
        *t = two_tangle(&rho.partial_trace(&pair)?)?;
    }
    Ok(TangleReport {
        tau_12: taus[0],
        tau_13: taus[1],
        tau_23: taus[2],
        tau_av: (taus[0] + taus[1] + taus[2]) / 3.0,
        tau_3: None,
    })
}

/// [`tangle_report`] plus the residual three-tangle.
pub fn tangle_report_pure(psi: &PureState) -> Result<TangleReport> {
    let mut report = tangle_report(&psi.to_density())?;
    report.tau_3 = Some(three_tangle_pure(psi)?);
    Ok(report)
}

/// Signed concurrence expressions of the three pairs, in
/// [`TangleReport`] order.
pub fn pair_expressions(rho: &DensityMatrix) -> Result<[f64; 3]> {
    let mut out = [0.0; 3];
    for (e, pair) in out.iter_mut().zip(pairs(rho)?) {
        *e = concurrence_expression(&rho.partial_trace(&pair)?)?;
    }
    Ok(out)
}

/// Residual tangle `τ₁₍₂₃₎ − τ₁₂ − τ₁₃` with `τ₁₍₂₃₎ = 4 det ρ₁`, clipped to
/// `[0, 1]`.
pub fn three_tangle_pure(psi: &PureState) -> Result<f64> {
    let rho = psi.to_density();
    let [p12, p13, _] = pairs(&rho)?;
    let rho1 = rho.partial_trace(&p12[..1])?;
    // For a 2×2 unit-trace matrix, 4 det ρ = 2 (1 − Tr ρ²).
    let tau_1_rest = 2.0 * (1.0 - rho1.purity());
    let t12 = two_tangle(&rho.partial_trace(&p12)?)?;
    let t13 = two_tangle(&rho.partial_trace(&p13)?)?;
    Ok((tau_1_rest - t12 - t13).clamp(0.0, 1.0))
}

/// [`three_tangle_pure`] for a density matrix, which must be pure.
pub fn three_tangle(rho: &DensityMatrix) -> Result<f64> {
    let purity = rho.purity();
    if (purity - 1.0).abs() > 1e-10 {
        return Err(Error::MixedState(purity));
    }
    // Dominant eigenvector recovers the state up to phase.
    let eig = nalgebra::SymmetricEigen::new(rho.matrix().clone());
    let (idx, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty spectrum");
    let v = eig.eigenvectors.column(idx).into_owned();
    three_tangle_pure(&PureState::normalized(rho.register().clone(), v)?)
}

/// Smallest noise value at which a monotonically vanishing metric reaches
/// zero.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Threshold {
    pub p_crit: f64,
    pub metric: String,
    pub bracket: (f64, f64),
    pub tolerance: f64,
}

/// Bisection for the vanishing point of `metric` on `bracket`.
///
/// Requires `metric(lo) > VANISH_TOL` and `metric(hi) ≤ VANISH_TOL`. The
/// returned `p_crit` is the midpoint of the final interval, so the metric is
/// nonzero at `p_crit − tol` and vanished at `p_crit + tol`.
pub fn find_threshold<F>(metric: F, label: &str, bracket: (f64, f64), tol: f64) -> Result<Threshold>
where
    F: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = bracket;
    let (f_lo, f_hi) = (metric(lo), metric(hi));
    if !(lo < hi) || !(f_lo > VANISH_TOL) || !(f_hi <= VANISH_TOL) {
        return Err(Error::Bracket { lo, hi, f_lo, f_hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if metric(mid) > VANISH_TOL {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Threshold {
        p_crit: 0.5 * (lo + hi),
        metric: label.to_string(),
        bracket,
        tolerance: tol,
    })
}

/// Location and value of a minimum found by golden-section search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Minimum {
    pub p_min: f64,
    pub value: f64,
    pub metric: String,
    pub tolerance: f64,
}

/// Golden-section search for a minimum of a unimodal `f` on `bracket`.
pub fn golden_section_min<F>(f: F, label: &str, bracket: (f64, f64), tol: f64) -> Minimum
where
    F: Fn(f64) -> f64,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = bracket;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    let p_min = 0.5 * (a + b);
    Minimum {
        p_min,
        value: f(p_min),
        metric: label.to_string(),
        tolerance: tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wfamily::{bell, ghz, w_canonical, w_mod, BellKind};

    #[test]
    fn bell_and_product_concurrence() {
        for kind in BellKind::ALL {
            let c = concurrence(&bell(kind).to_density()).unwrap();
            assert!((c - 1.0).abs() < 1e-10, "{kind:?}: {c}");
        }
        let prod = PureState::basis(&[1, 2], "00").unwrap().to_density();
        assert!(concurrence(&prod).unwrap().abs() < 1e-10);
        assert!(concurrence(&ghz().to_density()).is_err());
    }

    #[test]
    fn w_family_tangles() {
        let r = tangle_report_pure(&w_mod()).unwrap();
        assert!((r.tau_12 - 0.25).abs() < 1e-10);
        assert!((r.tau_13 - 0.5).abs() < 1e-10);
        assert!((r.tau_23 - 0.5).abs() < 1e-10);
        assert!((r.tau_av - 5.0 / 12.0).abs() < 1e-10);
        assert!(r.tau_3.unwrap().abs() < 1e-10);

        let w = tangle_report(&w_canonical().to_density()).unwrap();
        for t in [w.tau_12, w.tau_13, w.tau_23] {
            assert!((t - 4.0 / 9.0).abs() < 1e-10);
        }
        let g = tangle_report_pure(&ghz()).unwrap();
        assert!(g.tau_12.abs() < 1e-10 && g.tau_13.abs() < 1e-10 && g.tau_23.abs() < 1e-10);
        assert!((g.tau_3.unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn three_tangle_rejects_mixed() {
        let rho = DensityMatrix::maximally_mixed(&[1, 2, 3]).unwrap();
        assert!(matches!(three_tangle(&rho), Err(Error::MixedState(_))));
        let t = three_tangle(&ghz().to_density()).unwrap();
        assert!((t - 1.0).abs() < 1e-10);
    }

    #[test]
    fn linear_metric_threshold() {
        let t = find_threshold(|p| 1.0 - p, "1-p", (0.0, 1.0), 1e-4).unwrap();
        assert!((t.p_crit - 1.0).abs() <= 1e-4);
        let err = find_threshold(|p| 1.0 - p, "1-p", (0.0, 0.5), 1e-4);
        assert!(matches!(err, Err(Error::Bracket { .. })));
    }

    #[test]
    fn golden_section_on_parabola() {
        let m = golden_section_min(|x| (x - 0.3).powi(2) + 0.1, "parabola", (0.0, 1.0), 1e-6);
        assert!((m.p_min - 0.3).abs() < 1e-5);
        assert!((m.value - 0.1).abs() < 1e-9);
    }
}
