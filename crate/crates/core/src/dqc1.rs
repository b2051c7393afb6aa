//! One-clean-qubit trace estimation.
//!
//! Qubit 0 starts in the deviation state `(1 ∓ ε σ_z)/2`, the `n`-qubit
//! register is maximally mixed. A Hadamard on the clean qubit followed by a
//! controlled-`U` leaves `⟨σ_x⟩ + i⟨σ_y⟩ = s · Tr U / 2^n` on the clean qubit,
//! where `s = ∓ε` is its signed polarization. The estimate is rescaled by
//! `1/s` so it does not depend on `ε`.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

pub use crate::circuit::{controlled, Circuit, Gate};
use crate::error::{argument, Error, Result};
use crate::factory::{deviation_state, DeviationSign};
use crate::linalg::{is_power_of_two_dim, CMatrix, C64, ZERO};
use crate::operator::Operator;

/// How the clean qubit is read out.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Readout {
    /// Measure `σ_x` (real part) and `σ_y` (imaginary part) directly.
    #[default]
    Canonical,
    /// Append `H` (real part) or `S†` then `H` (imaginary part) and measure
    /// `σ_z`, as in the literal circuit drawing.
    FinalHadamard,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dqc1Options {
    pub readout: Readout,
    pub sign: DeviationSign,
}

fn signal_scale(epsilon: f64, sign: DeviationSign) -> Result<f64> {
    if epsilon == 0.0 {
        return Err(Error::Domain(
            "epsilon = 0 leaves no signal on the clean qubit".into(),
        ));
    }
    Ok(sign.factor() * epsilon)
}

/// Clean-qubit expectations `(⟨σ_x⟩, ⟨σ_y⟩)` after the circuit, before
/// rescaling.
fn clean_qubit_signal(u: &Operator, epsilon: f64, options: Dqc1Options) -> Result<(f64, f64)> {
    let n = u.n_qubits();
    crate::check_qubit_cap(n + 1)?;
    let circuit = Circuit::trace_estimation(u)?;
    let rho0 = deviation_state(n + 1, epsilon, options.sign)?;
    let rho = circuit.run(&rho0)?;
    match options.readout {
        Readout::Canonical => {
            let x = Operator::pauli_x().embed(&[0], n + 1)?;
            let y = Operator::pauli_y().embed(&[0], n + 1)?;
            Ok((rho.expectation(&x)?, rho.expectation(&y)?))
        }
        Readout::FinalHadamard => {
            let z = Operator::pauli_z().embed(&[0], n + 1)?;
            let h = Operator::hadamard().embed(&[0], n + 1)?;
            let s_dag = Operator::phase_s().adjoint().embed(&[0], n + 1)?;
            let re = rho.apply_unitary(&h)?.expectation(&z)?;
            let im = rho.apply_unitary(&(&h * &s_dag))?.expectation(&z)?;
            Ok((re, im))
        }
    }
}

/// Simulated estimate of `Tr U / 2^n` with the default readout and the
/// `1 - ε σ_z` initial state.
pub fn dqc1_exact(u: &Operator, epsilon: f64) -> Result<C64> {
    dqc1_exact_with(u, epsilon, Dqc1Options::default())
}

pub fn dqc1_exact_with(u: &Operator, epsilon: f64, options: Dqc1Options) -> Result<C64> {
    let s = signal_scale(epsilon, options.sign)?;
    let (x, y) = clean_qubit_signal(u, epsilon, options)?;
    Ok(C64::new(x / s, y / s))
}

/// Finite-shot estimate of one quadrature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShotResult {
    /// Rescaled estimate of `Re` or `Im` of `Tr U / 2^n`.
    pub estimate: f64,
    /// `sqrt((1 - m²)/shots) / |s|` for raw sample mean `m`.
    pub stderr: f64,
    pub shots: u64,
    pub seed: u64,
}

const SHOT_CHUNK: u64 = 1 << 16;

/// Count `+1` outcomes among `shots` draws with `P(+1) = p_plus`; shot `i` of
/// quadrature `stream` always consumes the same 64-bit word of the ChaCha
/// stream keyed by `seed`, so the count is independent of chunking.
fn count_plus(seed: u64, stream: u64, shots: u64, p_plus: f64) -> u64 {
    let chunks = shots.div_ceil(SHOT_CHUNK) as usize;
    let counts = crate::par::map_indexed(chunks, |c| {
        let start = c as u64 * SHOT_CHUNK;
        let end = (start + SHOT_CHUNK).min(shots);
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        rng.set_word_pos(2 * start as u128);
        (start..end)
            .filter(|_| {
                let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
                u < p_plus
            })
            .count() as u64
    });
    counts.iter().sum()
}

fn shot_result(mean: f64, scale: f64, seed: u64, stream: u64, shots: u64) -> ShotResult {
    let m = mean.clamp(-1.0, 1.0);
    let plus = count_plus(seed, stream, shots, 0.5 * (1.0 + m));
    let sample_mean = (2.0 * plus as f64 - shots as f64) / shots as f64;
    ShotResult {
        estimate: sample_mean / scale,
        stderr: ((1.0 - sample_mean * sample_mean).max(0.0) / shots as f64).sqrt() / scale.abs(),
        shots,
        seed,
    }
}

/// `(real, imaginary)` estimates from `shots` ±1 outcomes per quadrature.
pub fn dqc1_sampled(
    u: &Operator,
    epsilon: f64,
    shots: u64,
    seed: u64,
) -> Result<(ShotResult, ShotResult)> {
    dqc1_sampled_with(u, epsilon, shots, seed, Dqc1Options::default())
}

pub fn dqc1_sampled_with(
    u: &Operator,
    epsilon: f64,
    shots: u64,
    seed: u64,
    options: Dqc1Options,
) -> Result<(ShotResult, ShotResult)> {
    if shots == 0 {
        return argument("shots must be at least 1");
    }
    let s = signal_scale(epsilon, options.sign)?;
    let (x, y) = clean_qubit_signal(u, epsilon, options)?;
    Ok((
        shot_result(x, s, seed, 0, shots),
        shot_result(y, s, seed, 1, shots),
    ))
}

/// Haar-random unitary: QR of a complex Gaussian matrix with the phases of
/// `R`'s diagonal folded back into `Q`.
pub fn random_unitary(dim: usize, seed: u64) -> Result<Operator> {
    if is_power_of_two_dim(dim).is_none() {
        return argument(format!("dimension {dim} is not a power of two"));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let g = CMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d == ZERO {
            C64::new(1.0, 0.0)
        } else {
            d / d.norm()
        };
        for row in 0..dim {
            q[(row, k)] *= phase;
        }
    }
    Operator::new(q)
}
