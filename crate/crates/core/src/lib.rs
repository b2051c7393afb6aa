//! Dense density-matrix simulation of mixed-state quantum information.
//!
//! The crate builds the states that appear in ensemble (NMR) quantum
//! information processing and analyses them:
//!
//! * [`state`] and [`operator`]: density matrices, partial trace and
//!   transpose, entropies, expectation values, unitary evolution.
//! * [`factory`]: thermal, Werner, pseudo-pure, cat, deviation and
//!   Bell-mixture states, plus separable-decomposition certificates.
//! * [`entanglement`]: PPT certificates, bisection of entanglement
//!   thresholds and the polarization-versus-size crossing analysis.
//! * [`discord`]: mutual information, measured classical correlation and
//!   quantum discord with single-qubit projective measurements.
//! * [`dqc1`]: the one-clean-qubit trace-estimation circuit, exact and with
//!   shot noise.
//! * [`coherence`]: multiple-quantum coherence orders, collective rotations,
//!   the labelling/time-reversal signal and collective dephasing.
//!
//! Qubit 0 is always the most significant tensor factor and every entropy is
//! in bits. Matrices are dense, so the register size is capped (12 qubits by
//! default, see [`set_max_qubits`]).

use std::sync::atomic::{AtomicUsize, Ordering};

pub mod circuit;
pub mod coherence;
pub mod discord;
pub mod dqc1;
pub mod entanglement;
pub mod error;
pub mod factory;
pub mod linalg;
pub mod operator;
mod par;
pub mod state;

pub use error::{Error, Result};
pub use linalg::{eig_hermitian, CMatrix, CVector, C64};
pub use operator::{tensor, Operator};
pub use state::{Bipartition, DensityMatrix, StateVector};

pub const DEFAULT_MAX_QUBITS: usize = 12;

static MAX_QUBITS: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_QUBITS);

/// Current dense-simulation cap on register size.
pub fn max_qubits() -> usize {
    MAX_QUBITS.load(Ordering::Relaxed)
}

/// Override the dense-simulation cap (process wide).
pub fn set_max_qubits(n: usize) {
    MAX_QUBITS.store(n, Ordering::Relaxed);
}

pub(crate) fn check_qubit_cap(n: usize) -> Result<()> {
    let cap = max_qubits();
    if n > cap {
        return Err(Error::Resource(format!(
            "{n} qubits exceeds the dense simulation cap of {cap}"
        )));
    }
    Ok(())
}
