//! Simulation and analysis of deterministic W-class state distribution.
//!
//! The crate is organised bottom-up:
//!
//! * [`qcore`]: a dense state-vector / density-matrix engine for small
//!   registers (up to [`qcore::MAX_QUBITS`] qubits) with big-endian qubit
//!   ordering.
//! * [`wfamily`]: the `W_m` family, the `W_mod` state, GHZ, Bell states, the
//!   preparation unitaries and the W-class measurement bases.
//! * [`noise`]: depolarizing channels, their composition and the repeater
//!   chain noise-event accounting.
//! * [`entmetrics`]: concurrence, two- and three-tangles and the threshold
//!   searches built on them.
//! * [`protocols`]: the three distribution protocols, correction tables, the
//!   noise-commutation check and the teleportation / dense-coding tasks.
//! * [`analysis`]: parameter sweeps and table export.
//!
//! ```
//! use wnet::noise::DepolarizingParam;
//! use wnet::protocols::protocol1;
//! use wnet::wfamily::w_mod;
//!
//! let p = DepolarizingParam::new(0.4).unwrap();
//! let result = protocol1([p; 3], &w_mod()).unwrap();
//! assert!((result.fidelity - 0.392).abs() < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod entmetrics;
mod error;
pub mod noise;
pub mod protocols;
pub mod qcore;
pub mod wfamily;

pub use error::{Error, Result};
