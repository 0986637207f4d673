//! Dense state-vector and density-matrix engine.
//!
//! Qubits are ordered big-endian: the first label of a register is the most
//! significant bit of the amplitude index, so `|100⟩` over `(1, 2, 3)` is
//! index 4. Every routine that maps between register positions and index bits
//! goes through [`bit_of`].

mod density;
mod kernel;
pub(crate) mod linalg;
mod measure;
mod operator;
mod register;
mod state;

pub use density::DensityMatrix;
pub use measure::{MeasurementBasis, MeasurementRecord, PureOutcome};
pub use operator::{pauli_i, pauli_x, pauli_y, pauli_z, QuantumChannel, UnitaryOp};
pub use register::{labels, QubitLabel, Register};
pub use state::PureState;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Largest register the engine accepts.
pub const MAX_QUBITS: usize = 8;
/// Tolerance for normalization, Hermiticity, unit trace and unitarity.
pub const STATE_TOL: f64 = 1e-12;
/// Tolerance for Kraus completeness and the PSD floor of density matrices.
pub const CHANNEL_TOL: f64 = 1e-10;
/// Outcomes with probability at or below this carry no post-measurement state.
pub const PROBABILITY_FLOOR: f64 = 1e-12;

/// Index bit that carries register position `pos` in an `n`-qubit register.
#[inline]
pub fn bit_of(n: usize, pos: usize) -> usize {
    n - 1 - pos
}

/// Parses a computational basis string such as `"101"` into its amplitude
/// index under big-endian ordering.
pub fn basis_index(bits: &str) -> Option<usize> {
    if bits.is_empty() || bits.len() > MAX_QUBITS {
        return None;
    }
    bits.chars().try_fold(0usize, |acc, c| match c {
        '0' => Some(acc << 1),
        '1' => Some((acc << 1) | 1),
        _ => None,
    })
}

pub(crate) fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub(crate) fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
