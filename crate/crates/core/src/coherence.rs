//! Multiple-quantum coherence.
//!
//! The element `ρ_ab` has coherence order `p = M_a - M_b`, where `M` is the
//! total spin-z quantum number of a basis state (`|0⟩` counts `+1/2`, `|1⟩`
//! counts `-1/2`). The product `I₊¹ I₊² … I₊ⁿ = |0…0⟩⟨1…1|` sits at order
//! `+n`. A collective z-rotation by `φ` multiplies order-`p` elements by
//! `e^{-ipφ}`, so high orders wind `p` times faster than single-spin
//! magnetization.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::error::{argument, Error, Result};
use crate::factory::{cat_state, pseudo_pure};
use crate::linalg::{CMatrix, C64};
use crate::operator::Operator;
use crate::state::{trace_product, DensityMatrix, StateVector};

/// Coherence order of the element `(row, col)`.
#[inline]
pub fn coherence_order(row: usize, col: usize) -> i32 {
    col.count_ones() as i32 - row.count_ones() as i32
}

/// Squared-magnitude weight of each coherence order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherenceSpectrum {
    pub n_qubits: usize,
    /// `p → Σ_{(a,b) at order p} |ρ_ab|²` for every `p ∈ [-n, n]`.
    pub weights: BTreeMap<i32, f64>,
    /// `Σ_p weights[p] = Tr ρ²`.
    pub total: f64,
}

impl CoherenceSpectrum {
    pub fn weight(&self, order: i32) -> f64 {
        self.weights.get(&order).copied().unwrap_or(0.0)
    }
}

pub fn coherence_spectrum(rho: &DensityMatrix) -> CoherenceSpectrum {
    let n = rho.n_qubits();
    let mut weights: BTreeMap<i32, f64> = (-(n as i32)..=n as i32).map(|p| (p, 0.0)).collect();
    let m = rho.matrix();
    for r in 0..rho.dim() {
        for c in 0..rho.dim() {
            *weights.get_mut(&coherence_order(r, c)).unwrap() += m[(r, c)].norm_sqr();
        }
    }
    let total = weights.values().sum();
    CoherenceSpectrum {
        n_qubits: n,
        weights,
        total,
    }
}

/// Conjugation by `exp(-i φ Σ_k σ_z^k / 2)`.
pub fn collective_rotation(rho: &DensityMatrix, phi: f64) -> DensityMatrix {
    rho.map_elements(|r, c, v| v * C64::from_polar(1.0, -(coherence_order(r, c) as f64) * phi))
}

/// Width of the Gaussian distribution of collective phases.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DephasingSpec {
    sigma: f64,
}

impl DephasingSpec {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return argument(format!(
                "dephasing width must be finite and nonnegative, got {sigma}"
            ));
        }
        Ok(Self { sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

/// Average of [`collective_rotation`] over `φ ~ N(0, σ²)`: order-`p`
/// elements shrink by `exp(-p²σ²/2)`.
pub fn collective_dephasing(rho: &DensityMatrix, spec: &DephasingSpec) -> DensityMatrix {
    let s2 = spec.sigma * spec.sigma;
    rho.map_elements(|r, c, v| {
        let p = coherence_order(r, c) as f64;
        v * (-0.5 * p * p * s2).exp()
    })
}

/// `H` on qubit 0 followed by CNOTs from qubit 0 to every other qubit:
/// maps `|0…0⟩` to the cat state.
pub fn cat_preparation(n_qubits: usize) -> Result<Operator> {
    if n_qubits == 0 {
        return argument("cat preparation needs at least one qubit");
    }
    crate::check_qubit_cap(n_qubits)?;
    let mut c = Circuit::new(n_qubits);
    c.push(Gate::Hadamard(0))?;
    for k in 1..n_qubits {
        c.push(Gate::ControlledU {
            control: 0,
            targets: vec![k],
            u: Operator::pauli_x(),
        })?;
    }
    c.unitary()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumBin {
    /// Signed frequency (coherence order).
    pub order: i64,
    /// `|F_k| / N`.
    pub amplitude: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MqSignal {
    pub n_qubits: usize,
    pub epsilon: f64,
    pub phi: Vec<f64>,
    /// Overlap with the initial deviation, normalized to 1 at `φ = 0`.
    pub signal: Vec<f64>,
    /// Fourier amplitudes ordered by signed frequency.
    pub spectrum: Vec<SpectrumBin>,
    /// Strongest nonzero frequency in `1..=N/2` (lowest wins ties).
    pub peak_order: usize,
}

/// The labelling / time-reversal experiment. For each of `samples` angles
/// `φ ∈ [0, 2π)`: prepare the pseudo-pure cat state from the pseudo-pure
/// `|0…0⟩` state, rotate collectively by `φ`, undo the preparation, and
/// record the overlap with the initial deviation `ρ₀ - I/2^n`.
pub fn mq_signal(n_qubits: usize, epsilon: f64, samples: usize) -> Result<MqSignal> {
    if samples < 2 || !samples.is_power_of_two() {
        return argument(format!(
            "sample count must be a power of two ≥ 2, got {samples}"
        ));
    }
    if epsilon == 0.0 {
        return Err(Error::Domain(
            "epsilon = 0 leaves no deviation to track".into(),
        ));
    }
    let prep = cat_preparation(n_qubits)?;
    let dim = 1usize << n_qubits;
    let rho0 = pseudo_pure(n_qubits, epsilon, &StateVector::basis(n_qubits, 0)?)?;
    let mixed = CMatrix::identity(dim, dim).scale(1.0 / dim as f64);
    let deviation = rho0.matrix() - &mixed;
    let norm = trace_product(&deviation, &deviation).re;

    let prepared = rho0.apply_unitary(&prep)?;
    debug_assert!(
        crate::linalg::max_abs_diff(
            prepared.matrix(),
            pseudo_pure(n_qubits, epsilon, &cat_state(n_qubits)?)?.matrix()
        ) < 1e-12
    );
    let undo = prep.adjoint().into_matrix();

    let phi: Vec<f64> = (0..samples)
        .map(|k| TAU * k as f64 / samples as f64)
        .collect();
    let signal = crate::par::map_indexed(samples, |k| {
        let rotated = collective_rotation(&prepared, phi[k]);
        let back = rotated.conjugate_unchecked(&undo);
        // Tr Δ0 is only zero up to roundoff; drop the identity part first
        trace_product(&deviation, &(back.matrix() - &mixed)).re / norm
    });

    let mut buffer: Vec<C64> = signal.iter().map(|&s| C64::new(s, 0.0)).collect();
    FftPlanner::new()
        .plan_fft_forward(samples)
        .process(&mut buffer);
    let amp = |k: usize| buffer[k].norm() / samples as f64;
    let mut spectrum: Vec<SpectrumBin> = (0..samples)
        .map(|k| SpectrumBin {
            order: if k <= samples / 2 {
                k as i64
            } else {
                k as i64 - samples as i64
            },
            amplitude: amp(k),
        })
        .collect();
    spectrum.sort_by_key(|b| b.order);
    let peak_order = (1..=samples / 2)
        .fold((0usize, f64::NEG_INFINITY), |best, k| {
            if amp(k) > best.1 {
                (k, amp(k))
            } else {
                best
            }
        })
        .0;

    Ok(MqSignal {
        n_qubits,
        epsilon,
        phi,
        signal,
        spectrum,
        peak_order,
    })
}
