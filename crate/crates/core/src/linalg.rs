//! Dense complex linear algebra shared by every module.
//!
//! Index convention: in a register of `n` qubits, qubit 0 is the most
//! significant tensor factor, so qubit `q` lives at bit `n - 1 - q` of a
//! computational-basis index.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{argument, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Tolerance for Hermiticity, unit trace, positivity and unitarity checks.
pub const TOL: f64 = 1e-10;

/// Eigenvalues below this are exact zeros for entropy purposes.
pub const ENTROPY_FLOOR: f64 = 1e-12;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Kronecker product `a ⊗ b`, row-major blocks.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Largest elementwise deviation `max |M - M†|`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for r in 0..n {
        for c in r..n {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

/// Largest elementwise deviation `max |A - B|`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn is_power_of_two_dim(dim: usize) -> Option<usize> {
    (dim.is_power_of_two()).then(|| dim.trailing_zeros() as usize)
}

/// Eigen-pairs of a Hermitian matrix, eigenvalues sorted descending and
/// eigenvectors in the matching columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    /// `V diag(f(λ)) V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            for r in 0..n {
                scaled[(r, k)] *= w;
            }
        }
        &scaled * self.vectors.adjoint()
    }
}

fn check_hermitian(m: &CMatrix) -> Result<()> {
    if !m.is_square() {
        return argument(format!("matrix is {}x{}, not square", m.nrows(), m.ncols()));
    }
    let defect = hermiticity_defect(m);
    if defect > TOL {
        return argument(format!(
            "matrix is not Hermitian (max |M - M†| = {defect:e})"
        ));
    }
    Ok(())
}

fn symmetrized(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigenvalues of a Hermitian matrix, sorted descending.
pub fn eig_hermitian(m: &CMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    let mut values: Vec<f64> = SymmetricEigen::new(symmetrized(m))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Full Hermitian eigendecomposition, eigenvalues sorted descending.
pub fn eigh(m: &CMatrix) -> Result<HermitianEigen> {
    check_hermitian(m)?;
    let eig = SymmetricEigen::new(symmetrized(m));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// Bit mask of `qubit` inside an `n`-qubit basis index.
#[inline]
pub(crate) fn qubit_mask(qubit: usize, n: usize) -> usize {
    1 << (n - 1 - qubit)
}

/// Expand a compact index over `qubits` (first listed = most significant)
/// into a full `n`-qubit basis index with all other bits zero.
pub(crate) fn scatter(compact: usize, qubits: &[usize], n: usize) -> usize {
    let k = qubits.len();
    qubits.iter().enumerate().fold(0, |acc, (pos, &q)| {
        if compact & (1 << (k - 1 - pos)) != 0 {
            acc | qubit_mask(q, n)
        } else {
            acc
        }
    })
}

/// Inverse of [`scatter`]: pull the bits of `qubits` out of a full index.
#[cfg(test)]
fn gather(full: usize, qubits: &[usize], n: usize) -> usize {
    let k = qubits.len();
    qubits.iter().enumerate().fold(0, |acc, (pos, &q)| {
        if full & qubit_mask(q, n) != 0 {
            acc | (1 << (k - 1 - pos))
        } else {
            acc
        }
    })
}

/// Table of `scatter(i, qubits, n)` for every compact index `i`.
pub(crate) fn scatter_table(qubits: &[usize], n: usize) -> Vec<usize> {
    (0..1usize << qubits.len())
        .map(|i| scatter(i, qubits, n))
        .collect()
}

pub(crate) fn complement(qubits: &[usize], n: usize) -> Vec<usize> {
    (0..n).filter(|q| !qubits.contains(q)).collect()
}
