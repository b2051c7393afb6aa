//! Constructors for the state families of ensemble quantum computing.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{argument, Error, Result};
use crate::linalg::{eigh, max_abs_diff, CMatrix, CVector, C64, TOL, ZERO};
use crate::operator::Operator;
use crate::state::{Bipartition, DensityMatrix, StateVector};

/// Order-of-magnitude nuclear spin polarization at room temperature, used as
/// the default in demonstration configurations.
pub const NMR_POLARIZATION: f64 = 1e-5;

/// Inputs for a thermal (Gibbs) state `e^{-βH} / Tr e^{-βH}`.
#[derive(Clone, Debug)]
pub struct ThermalSpec {
    hamiltonian: Operator,
    beta: f64,
    n_qubits: usize,
}

impl ThermalSpec {
    pub fn new(hamiltonian: Operator, beta: f64, n_qubits: usize) -> Result<Self> {
        if hamiltonian.n_qubits() != n_qubits {
            return argument(format!(
                "Hamiltonian has dimension {} but {} qubits requested",
                hamiltonian.dim(),
                n_qubits
            ));
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return argument(format!("beta must be finite and nonnegative, got {beta}"));
        }
        if !hamiltonian.is_hermitian() {
            return argument("Hamiltonian must be Hermitian");
        }
        if !hamiltonian
            .matrix()
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            return argument("Hamiltonian entries must be finite");
        }
        crate::check_qubit_cap(n_qubits)?;
        Ok(Self {
            hamiltonian,
            beta,
            n_qubits,
        })
    }

    /// Zeeman Hamiltonian `Σ_k ω_k σ_z^k / 2` with the given Larmor
    /// frequencies (one per qubit).
    pub fn zeeman(frequencies: &[f64], beta: f64) -> Result<Self> {
        let n = frequencies.len();
        if n == 0 {
            return argument("at least one spin is required");
        }
        crate::check_qubit_cap(n)?;
        let diag: Vec<f64> = (0..1usize << n)
            .map(|a| {
                frequencies
                    .iter()
                    .enumerate()
                    .map(|(q, w)| {
                        if a & (1 << (n - 1 - q)) == 0 {
                            w / 2.0
                        } else {
                            -w / 2.0
                        }
                    })
                    .sum()
            })
            .collect();
        Self::new(Operator::diagonal(&diag)?, beta, n)
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }
}

/// Which expression of the thermal state to build.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThermalForm {
    /// `e^{-βH} / Z`.
    #[default]
    Exact,
    /// High-temperature expansion `(1 - βH) / Tr(1 - βH)`.
    FirstOrder,
}

pub fn thermal_state(spec: &ThermalSpec, form: ThermalForm) -> Result<DensityMatrix> {
    let h = spec.hamiltonian.matrix();
    let eig = eigh(h)?;
    let beta = spec.beta;
    match form {
        ThermalForm::Exact => {
            // shift by the ground energy so every weight is in (0, 1]
            let ground = eig.values.last().copied().unwrap_or(0.0);
            let z: f64 = eig
                .values
                .iter()
                .map(|&e| (-beta * (e - ground)).exp())
                .sum();
            let rho = eig.map_spectrum(|e| (-beta * (e - ground)).exp() / z);
            Ok(hermitian_density(rho))
        }
        ThermalForm::FirstOrder => {
            let top = eig.values.first().copied().unwrap_or(0.0);
            if 1.0 - beta * top < -TOL {
                return Err(Error::Domain(format!(
                    "first-order thermal expansion is not positive (1 - β·λmax = {})",
                    1.0 - beta * top
                )));
            }
            let dim = h.nrows();
            let norm = dim as f64 - beta * h.trace().re;
            let rho = (CMatrix::identity(dim, dim) - h.scale(beta)).scale(1.0 / norm);
            Ok(hermitian_density(rho))
        }
    }
}

fn hermitian_density(m: CMatrix) -> DensityMatrix {
    DensityMatrix::from_matrix_unchecked((&m + m.adjoint()).scale(0.5))
}

fn check_unit_interval(name: &str, epsilon: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&epsilon) {
        return argument(format!("{name} must lie in [0, 1], got {epsilon}"));
    }
    Ok(())
}

/// The four Bell states in the fixed order used by [`bell_mixture`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BellState {
    /// `(|00⟩ + |11⟩)/√2`
    PsiPlus,
    /// `(|01⟩ + |10⟩)/√2`
    PhiPlus,
    /// `(|01⟩ - |10⟩)/√2`
    PhiMinus,
    /// `(|00⟩ - |11⟩)/√2`
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PsiPlus,
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiMinus,
    ];

    pub fn vector(self) -> StateVector {
        let s = C64::new(FRAC_1_SQRT_2, 0.0);
        let amps = match self {
            BellState::PsiPlus => [s, ZERO, ZERO, s],
            BellState::PhiPlus => [ZERO, s, s, ZERO],
            BellState::PhiMinus => [ZERO, s, -s, ZERO],
            BellState::PsiMinus => [s, ZERO, ZERO, -s],
        };
        StateVector::from_amplitudes(&amps).expect("normalized")
    }
}

/// `(1-ε)/4 · I + ε |Ψ₊⟩⟨Ψ₊|`.
pub fn werner(epsilon: f64) -> Result<DensityMatrix> {
    check_unit_interval("Werner parameter", epsilon)?;
    pseudo_pure(2, epsilon, &BellState::PsiPlus.vector())
}

/// `(1-ε)/2^n · I + ε |ψ⟩⟨ψ|`.
pub fn pseudo_pure(n_qubits: usize, epsilon: f64, psi: &StateVector) -> Result<DensityMatrix> {
    check_unit_interval("pseudo-pure polarization", epsilon)?;
    if psi.n_qubits() != n_qubits {
        return argument(format!(
            "state vector has {} qubits, expected {n_qubits}",
            psi.n_qubits()
        ));
    }
    crate::check_qubit_cap(n_qubits)?;
    let dim = 1usize << n_qubits;
    let a = psi.amplitudes();
    let background = (1.0 - epsilon) / dim as f64;
    let mut m = (a * a.adjoint()).scale(epsilon);
    for k in 0..dim {
        m[(k, k)] += background;
    }
    Ok(DensityMatrix::from_matrix_unchecked(m))
}

/// `(|0…0⟩ + |1…1⟩)/√2`.
pub fn cat_state(n_qubits: usize) -> Result<StateVector> {
    if n_qubits == 0 {
        return argument("cat state needs at least one qubit");
    }
    crate::check_qubit_cap(n_qubits)?;
    let dim = 1usize << n_qubits;
    let mut amps = CVector::zeros(dim);
    amps[0] = C64::new(FRAC_1_SQRT_2, 0.0);
    amps[dim - 1] = C64::new(FRAC_1_SQRT_2, 0.0);
    StateVector::new(amps)
}

/// Sign of the deviation term in [`deviation_state`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeviationSign {
    /// `1 - ε σ_z¹`, as drawn for the trace-estimation circuit.
    #[default]
    Minus,
    /// `1 + ε σ_z¹`, polarized toward `|0⟩`.
    Plus,
}

impl DeviationSign {
    pub fn factor(self) -> f64 {
        match self {
            DeviationSign::Minus => -1.0,
            DeviationSign::Plus => 1.0,
        }
    }
}

/// `(1 ∓ ε σ_z¹) / 2^n`: qubit 0 polarized, the rest maximally mixed.
pub fn deviation_state(
    n_qubits: usize,
    epsilon: f64,
    sign: DeviationSign,
) -> Result<DensityMatrix> {
    if n_qubits == 0 {
        return argument("deviation state needs at least one qubit");
    }
    if epsilon.is_nan() || epsilon.abs() > 1.0 {
        return argument(format!("|epsilon| must be at most 1, got {epsilon}"));
    }
    crate::check_qubit_cap(n_qubits)?;
    let dim = 1usize << n_qubits;
    let s = sign.factor() * epsilon;
    let diag: Vec<f64> = (0..dim)
        .map(|a| {
            let z = if a < dim / 2 { 1.0 } else { -1.0 };
            (1.0 + s * z) / dim as f64
        })
        .collect();
    DensityMatrix::diagonal(&diag)
}

/// `Σ_k w_k |Bell_k⟩⟨Bell_k|` in the order of [`BellState::ALL`].
pub fn bell_mixture(weights: [f64; 4]) -> Result<DensityMatrix> {
    if weights.iter().any(|&w| !(w >= 0.0 && w.is_finite())) {
        return argument(format!("Bell weights must be nonnegative, got {weights:?}"));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > TOL {
        return argument(format!("Bell weights must sum to 1, got {total}"));
    }
    let mut m = CMatrix::zeros(4, 4);
    for (w, b) in weights.iter().zip(BellState::ALL) {
        let v = b.vector();
        let a = v.amplitudes();
        m += (a * a.adjoint()).scale(*w);
    }
    Ok(DensityMatrix::from_matrix_unchecked(m))
}

/// Bell-diagonal weights that reproduce `werner(ε)`.
pub fn werner_bell_weights(epsilon: f64) -> [f64; 4] {
    let rest = (1.0 - epsilon) / 4.0;
    [(1.0 + 3.0 * epsilon) / 4.0, rest, rest, rest]
}

#[derive(Clone, Debug)]
pub struct SeparableTerm {
    pub weight: f64,
    pub first: DensityMatrix,
    pub second: DensityMatrix,
}

/// A convex combination `Σ a_i ρ₁ᵢ ⊗ ρ₂ᵢ`.
#[derive(Clone, Debug)]
pub struct SeparableDecomposition {
    terms: Vec<SeparableTerm>,
}

impl SeparableDecomposition {
    pub fn new(terms: Vec<SeparableTerm>) -> Result<Self> {
        if terms.is_empty() {
            return argument("decomposition needs at least one term");
        }
        if let Some(t) = terms.iter().find(|t| t.weight.is_nan() || t.weight < 0.0) {
            return argument(format!("negative weight {} in decomposition", t.weight));
        }
        let total: f64 = terms.iter().map(|t| t.weight).sum();
        if (total - 1.0).abs() > TOL {
            return argument(format!("decomposition weights sum to {total}, not 1"));
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[SeparableTerm] {
        &self.terms
    }

    /// Equal mixture of the four two-qubit computational basis states.
    pub fn uniform_computational_basis() -> Self {
        let terms = (0..4)
            .map(|k| SeparableTerm {
                weight: 0.25,
                first: StateVector::basis(1, k >> 1).unwrap().to_density(),
                second: StateVector::basis(1, k & 1).unwrap().to_density(),
            })
            .collect();
        Self { terms }
    }

    pub fn assemble(&self) -> CMatrix {
        self.terms
            .iter()
            .fold(CMatrix::zeros(self.dim(), self.dim()), |acc, t| {
                acc + t.first.tensor(&t.second).into_matrix().scale(t.weight)
            })
    }

    fn dim(&self) -> usize {
        self.terms[0].first.dim() * self.terms[0].second.dim()
    }
}

/// Largest elementwise deviation between the assembled decomposition and
/// `rho`. A residual at or below `1e-10` certifies separability.
pub fn verify_separable_decomposition(
    decomposition: &SeparableDecomposition,
    rho: &DensityMatrix,
) -> Result<f64> {
    for t in decomposition.terms() {
        if t.first.dim() * t.second.dim() != rho.dim() {
            return argument(format!(
                "term of dimension {}x{} does not match state dimension {}",
                t.first.dim(),
                t.second.dim(),
                rho.dim()
            ));
        }
    }
    Ok(max_abs_diff(&decomposition.assemble(), rho.matrix()))
}

/// True iff `psi` has Schmidt rank one across `cut`.
pub fn is_product(psi: &StateVector, cut: &Bipartition) -> Result<bool> {
    if cut.n_qubits() != psi.n_qubits() {
        return argument("bipartition does not match state size");
    }
    let reduced = psi.to_density().partial_trace(cut.side_a())?;
    Ok(reduced.purity() >= 1.0 - TOL)
}
