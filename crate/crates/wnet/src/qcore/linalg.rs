//! Hermitian eigen-decomposition helpers.

use nalgebra::SymmetricEigen;

use super::{CMatrix, C64};

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Eigenvalues of the Hermitian part of `m`, in descending order.
pub(crate) fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = hermitian_part(m)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// Columns `√λᵢ vᵢ` for the eigenpairs of a positive semidefinite Hermitian
/// matrix with `λᵢ > cutoff`, so that `W W† ≈ m`. Eigenvalues at or below
/// the cutoff are treated as round-off and dropped.
pub(crate) fn weighted_eigenvectors(m: &CMatrix, cutoff: f64) -> CMatrix {
    let eig = SymmetricEigen::new(hermitian_part(m));
    let kept: Vec<usize> = (0..eig.eigenvalues.len())
        .filter(|&j| eig.eigenvalues[j] > cutoff)
        .collect();
    CMatrix::from_fn(m.nrows(), kept.len(), |i, k| {
        let j = kept[k];
        eig.eigenvectors[(i, j)] * eig.eigenvalues[j].sqrt()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weighted_eigenvectors_factor_the_matrix() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(0.7, 0.0),
                C64::new(0.1, 0.2),
                C64::new(0.1, -0.2),
                C64::new(0.3, 0.0),
            ],
        );
        let w = weighted_eigenvectors(&m, 0.0);
        assert!(super::super::max_abs_diff(&(&w * w.adjoint()), &m) < 1e-12);
        let ev = hermitian_eigenvalues(&m);
        assert!(ev[0] >= ev[1]);
        assert!((ev[0] + ev[1] - 1.0).abs() < 1e-12);
    }
}
