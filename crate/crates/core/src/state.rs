//! Density matrices, pure state vectors and bipartitions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{argument, Error, Result};
use crate::linalg::{
    complement, eig_hermitian, hermiticity_defect, is_power_of_two_dim, kron, scatter_table,
    CMatrix, CVector, C64, ENTROPY_FLOOR, TOL, ZERO,
};
use crate::operator::{check_distinct, Operator};

/// A normalized pure state on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: CVector,
}

impl StateVector {
    pub fn new(amps: CVector) -> Result<Self> {
        let Some(n_qubits) = is_power_of_two_dim(amps.len()) else {
            return argument(format!("state length {} is not a power of two", amps.len()));
        };
        let norm = amps.norm();
        if (norm - 1.0).abs() > TOL {
            return argument(format!("state vector not normalized (norm = {norm})"));
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn from_amplitudes(amps: &[C64]) -> Result<Self> {
        Self::new(CVector::from_column_slice(amps))
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if index >= dim {
            return argument(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            ));
        }
        let mut amps = CVector::zeros(dim);
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    pub fn tensor(&self, other: &StateVector) -> StateVector {
        Self {
            n_qubits: self.n_qubits + other.n_qubits,
            amps: self.amps.kronecker(&other.amps),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }
}

/// A split of the qubits `0..n` into two nonempty, disjoint sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartition {
    n_qubits: usize,
    side_a: Vec<usize>,
    side_b: Vec<usize>,
}

impl Bipartition {
    /// Side A is `side_a`; side B is its complement.
    pub fn new(n_qubits: usize, side_a: &[usize]) -> Result<Self> {
        check_distinct(side_a, n_qubits)?;
        let mut a = side_a.to_vec();
        a.sort_unstable();
        let b = complement(&a, n_qubits);
        if a.is_empty() || b.is_empty() {
            return argument("both sides of a bipartition must be nonempty");
        }
        Ok(Self {
            n_qubits,
            side_a: a,
            side_b: b,
        })
    }

    /// `{q} | rest`.
    pub fn one_vs_rest(n_qubits: usize, q: usize) -> Result<Self> {
        Self::new(n_qubits, &[q])
    }

    /// First `⌊n/2⌋` qubits against the rest.
    pub fn balanced(n_qubits: usize) -> Result<Self> {
        let a: Vec<usize> = (0..n_qubits / 2).collect();
        Self::new(n_qubits, &a)
    }

    pub fn swapped(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            side_a: self.side_b.clone(),
            side_b: self.side_a.clone(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[usize] {
        &self.side_b
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}|{:?}", self.side_a, self.side_b)
    }
}

/// A Hermitian, unit-trace, positive-semidefinite matrix on `n` qubits.
///
/// Values are immutable; every operation returns a new matrix.
#[derive(Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: CMatrix,
}

impl fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensityMatrix({} qubits){}", self.n_qubits, self.matrix)
    }
}

/// Check the three density-matrix invariants, naming the first one violated.
pub fn check_density_invariants(m: &CMatrix) -> Result<()> {
    let defect = hermiticity_defect(m);
    if defect > TOL {
        return Err(Error::Invariant {
            invariant: "Hermitian",
            detail: format!("max |ρ - ρ†| = {defect:e}"),
        });
    }
    let tr = m.trace();
    if (tr - C64::new(1.0, 0.0)).norm() > TOL {
        return Err(Error::Invariant {
            invariant: "unit trace",
            detail: format!("Tr ρ = {} + {}i", tr.re, tr.im),
        });
    }
    let min = eig_hermitian(m)?.last().copied().unwrap_or(0.0);
    if min < -TOL {
        return Err(Error::Invariant {
            invariant: "positive semidefinite",
            detail: format!("minimum eigenvalue {min:e}"),
        });
    }
    Ok(())
}

impl DensityMatrix {
    /// Validate and wrap a matrix.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return argument(format!(
                "density matrix is {}x{}",
                matrix.nrows(),
                matrix.ncols()
            ));
        }
        let Some(n_qubits) = is_power_of_two_dim(matrix.nrows()) else {
            return argument(format!(
                "dimension {} is not a power of two",
                matrix.nrows()
            ));
        };
        crate::check_qubit_cap(n_qubits)?;
        check_density_invariants(&matrix)?;
        Ok(Self { n_qubits, matrix })
    }

    /// Wrap a matrix already known to satisfy the invariants.
    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        let n_qubits = matrix.nrows().trailing_zeros() as usize;
        Self { n_qubits, matrix }
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        let a = psi.amplitudes();
        Self::from_matrix_unchecked(a * a.adjoint())
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Self::from_matrix_unchecked(CMatrix::identity(dim, dim).scale(1.0 / dim as f64))
    }

    /// Diagonal state from a probability vector over the computational basis.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        if probs.iter().any(|&p| p < 0.0 || !p.is_finite()) {
            return argument("probabilities must be finite and nonnegative");
        }
        let d = probs.len();
        Self::new(CMatrix::from_fn(d, d, |r, c| {
            if r == c {
                C64::new(probs[r], 0.0)
            } else {
                ZERO
            }
        }))
    }

    pub fn validate(&self) -> Result<()> {
        check_density_invariants(&self.matrix)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `ρ ⊗ σ`.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        Self::from_matrix_unchecked(kron(&self.matrix, &other.matrix))
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        eig_hermitian(&self.matrix).expect("density matrices are Hermitian")
    }

    /// Reduced state on `keep` (output qubits in ascending index order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return argument("partial trace must keep at least one qubit");
        }
        let n = self.n_qubits;
        check_distinct(keep, n)?;
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        let traced = complement(&keep, n);
        let k_idx = scatter_table(&keep, n);
        let t_idx = scatter_table(&traced, n);
        let d = k_idx.len();
        let out = CMatrix::from_fn(d, d, |i, j| {
            t_idx
                .iter()
                .map(|&t| self.matrix[(k_idx[i] | t, k_idx[j] | t)])
                .sum()
        });
        Ok(Self::from_matrix_unchecked(out))
    }

    /// Transpose the side-B indices of the cut. The result is Hermitian with
    /// unit trace but may have negative eigenvalues.
    pub fn partial_transpose(&self, cut: &Bipartition) -> Result<Operator> {
        self.check_cut(cut)?;
        let n = self.n_qubits;
        let mask_b = cut
            .side_b()
            .iter()
            .fold(0usize, |m, &q| m | crate::linalg::qubit_mask(q, n));
        let d = self.dim();
        let out = CMatrix::from_fn(d, d, |r, c| {
            let r2 = (r & !mask_b) | (c & mask_b);
            let c2 = (c & !mask_b) | (r & mask_b);
            self.matrix[(r2, c2)]
        });
        Ok(Operator::from_matrix_unchecked(out))
    }

    pub(crate) fn check_cut(&self, cut: &Bipartition) -> Result<()> {
        if cut.n_qubits() != self.n_qubits {
            return argument(format!(
                "bipartition is over {} qubits but state has {}",
                cut.n_qubits(),
                self.n_qubits
            ));
        }
        Ok(())
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> f64 {
        entropy_of_spectrum(&self.eigenvalues())
    }

    /// `Re Tr[O ρ]` for Hermitian `O`.
    pub fn expectation(&self, observable: &Operator) -> Result<f64> {
        if observable.dim() != self.dim() {
            return argument(format!(
                "observable dimension {} does not match state dimension {}",
                observable.dim(),
                self.dim()
            ));
        }
        if !observable.is_hermitian() {
            return argument("observable must be Hermitian");
        }
        Ok(trace_product(observable.matrix(), &self.matrix).re)
    }

    /// `U ρ U†`.
    pub fn apply_unitary(&self, u: &Operator) -> Result<DensityMatrix> {
        if u.dim() != self.dim() {
            return argument(format!(
                "unitary dimension {} does not match state dimension {}",
                u.dim(),
                self.dim()
            ));
        }
        let defect = u.unitarity_defect();
        if defect > TOL {
            return argument(format!(
                "operator is not unitary (max |UU† - 1| = {defect:e})"
            ));
        }
        Ok(self.conjugate_unchecked(u.matrix()))
    }

    pub(crate) fn conjugate_unchecked(&self, u: &CMatrix) -> DensityMatrix {
        let m = u * &self.matrix * u.adjoint();
        Self::from_matrix_unchecked((&m + m.adjoint()).scale(0.5))
    }

    /// Elementwise map over `(row, col, value)`; caller guarantees the
    /// result is still a density matrix.
    pub(crate) fn map_elements(&self, f: impl Fn(usize, usize, C64) -> C64) -> DensityMatrix {
        let d = self.dim();
        Self::from_matrix_unchecked(CMatrix::from_fn(d, d, |r, c| f(r, c, self.matrix[(r, c)])))
    }
}

/// `Tr[A B]` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let d = a.nrows();
    let mut acc = ZERO;
    for i in 0..d {
        for j in 0..d {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// `-Σ λ log₂ λ`, ignoring eigenvalues below the entropy floor.
pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    let h: f64 = values
        .iter()
        .filter(|&&l| l > ENTROPY_FLOOR)
        .map(|&l| -l * l.log2())
        .sum();
    h.max(0.0)
}
