//! Index arithmetic shared by the state and density-matrix types.

use super::{bit_of, CMatrix, C64};

/// Offsets of the `2^k` sub-indices spanned by `positions`, in big-endian
/// order over `positions` (the first position is the most significant bit of
/// the sub-index).
pub(crate) fn spread(positions: &[usize], n: usize) -> Vec<usize> {
    let k = positions.len();
    (0..1usize << k)
        .map(|s| {
            positions
                .iter()
                .enumerate()
                .filter(|(j, _)| (s >> (k - 1 - j)) & 1 == 1)
                .map(|(_, &p)| 1usize << bit_of(n, p))
                .sum()
        })
        .collect()
}

/// Left-multiplies every length-`2^n` column of `data` by `op` acting on the
/// qubits at `positions` (identity elsewhere).
pub(crate) fn apply_to_columns(op: &CMatrix, positions: &[usize], n: usize, data: &mut [C64]) {
    let dim = 1usize << n;
    let offsets = spread(positions, n);
    let sub = offsets.len();
    debug_assert_eq!(op.nrows(), sub);
    let target_mask: usize = positions.iter().map(|&p| 1usize << bit_of(n, p)).sum();
    let mut buf = vec![C64::new(0.0, 0.0); sub];
    for col in data.chunks_exact_mut(dim) {
        for base in (0..dim).filter(|b| b & target_mask == 0) {
            for (s, slot) in buf.iter_mut().enumerate() {
                *slot = col[base + offsets[s]];
            }
            for r in 0..sub {
                let mut acc = C64::new(0.0, 0.0);
                for (cidx, v) in buf.iter().enumerate() {
                    acc += op[(r, cidx)] * v;
                }
                col[base + offsets[r]] = acc;
            }
        }
    }
}

/// `O ρ O†` with `O` acting on `positions`.
pub(crate) fn conjugate(op: &CMatrix, positions: &[usize], n: usize, rho: &CMatrix) -> CMatrix {
    let mut left = rho.clone();
    apply_to_columns(op, positions, n, left.as_mut_slice());
    let mut right = left.adjoint();
    apply_to_columns(op, positions, n, right.as_mut_slice());
    right.adjoint()
}

/// For a reordering where new position `i` holds old position `perm[i]`,
/// returns the old amplitude index for every new index.
pub(crate) fn permutation_map(perm: &[usize]) -> Vec<usize> {
    let n = perm.len();
    (0..1usize << n)
        .map(|new_idx| {
            perm.iter()
                .enumerate()
                .filter(|(new_pos, _)| (new_idx >> bit_of(n, *new_pos)) & 1 == 1)
                .map(|(_, &old_pos)| 1usize << bit_of(n, old_pos))
                .sum()
        })
        .collect()
}
