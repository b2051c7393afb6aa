//! Square operators on qubit registers: Hamiltonians, gates, observables.

use std::fmt;
use std::ops::Mul;

use crate::error::{argument, Result};
use crate::linalg::{
    complement, hermiticity_defect, is_power_of_two_dim, kron, max_abs_diff, scatter_table,
    CMatrix, C64, I, ONE, TOL, ZERO,
};

/// A complex `2^n x 2^n` matrix. Unitarity and Hermiticity are not stored;
/// they are checked on demand with [`Operator::is_unitary`] and
/// [`Operator::is_hermitian`] at tolerance [`TOL`].
#[derive(Clone, PartialEq)]
pub struct Operator {
    n_qubits: usize,
    matrix: CMatrix,
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Operator({} qubits){}", self.n_qubits, self.matrix)
    }
}

impl Operator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return argument(format!(
                "operator must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            ));
        }
        match is_power_of_two_dim(matrix.nrows()) {
            Some(n_qubits) => Ok(Self { n_qubits, matrix }),
            None => argument(format!(
                "operator dimension {} is not a power of two",
                matrix.nrows()
            )),
        }
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        let n_qubits = matrix.nrows().trailing_zeros() as usize;
        Self { n_qubits, matrix }
    }

    fn from_2x2(m: [C64; 4]) -> Self {
        Self::from_matrix_unchecked(CMatrix::from_row_slice(2, 2, &m))
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self::from_matrix_unchecked(CMatrix::identity(1 << n_qubits, 1 << n_qubits))
    }

    pub fn pauli_x() -> Self {
        Self::from_2x2([ZERO, ONE, ONE, ZERO])
    }

    pub fn pauli_y() -> Self {
        Self::from_2x2([ZERO, -I, I, ZERO])
    }

    pub fn pauli_z() -> Self {
        Self::from_2x2([ONE, ZERO, ZERO, -ONE])
    }

    /// `I₊ = (σx + iσy)/2 = |0⟩⟨1|`, the single-spin raising operator.
    pub fn raising() -> Self {
        Self::from_2x2([ZERO, ONE, ZERO, ZERO])
    }

    pub fn hadamard() -> Self {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::from_2x2([h, h, h, -h])
    }

    /// Phase gate `S = diag(1, i)`.
    pub fn phase_s() -> Self {
        Self::from_2x2([ONE, ZERO, ZERO, I])
    }

    /// Diagonal operator from real entries.
    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        let d = entries.len();
        let m = CMatrix::from_fn(d, d, |r, c| {
            if r == c {
                C64::new(entries[r], 0.0)
            } else {
                ZERO
            }
        });
        Self::new(m)
    }

    /// `Σ_k σ_z^k / 2`, the total spin-z (magnetic quantum number) operator.
    pub fn total_spin_z(n_qubits: usize) -> Self {
        let diag: Vec<f64> = (0..1usize << n_qubits)
            .map(|a| n_qubits as f64 / 2.0 - a.count_ones() as f64)
            .collect();
        Self::diagonal(&diag).expect("power-of-two dimension")
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

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_matrix_unchecked(self.matrix.adjoint())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_matrix_unchecked(self.matrix.map(|x| x * s))
    }

    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.matrix)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() <= TOL
    }

    /// `max |U U† - 1|`.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = &self.matrix * self.matrix.adjoint();
        max_abs_diff(&prod, &CMatrix::identity(self.dim(), self.dim()))
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_defect() <= TOL
    }

    /// Spectral norm of a Hermitian operator (largest |eigenvalue|).
    pub fn hermitian_norm(&self) -> Result<f64> {
        let ev = crate::linalg::eig_hermitian(&self.matrix)?;
        Ok(ev.iter().fold(0.0, |acc: f64, v| acc.max(v.abs())))
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &Operator) -> Operator {
        Self {
            n_qubits: self.n_qubits + other.n_qubits,
            matrix: kron(&self.matrix, &other.matrix),
        }
    }

    /// Lift this operator into an `n_total`-qubit register acting on
    /// `targets` (the first target takes this operator's most significant
    /// qubit); identity elsewhere.
    pub fn embed(&self, targets: &[usize], n_total: usize) -> Result<Operator> {
        if targets.len() != self.n_qubits {
            return argument(format!(
                "operator acts on {} qubits but {} targets given",
                self.n_qubits,
                targets.len()
            ));
        }
        check_distinct(targets, n_total)?;
        let rest = complement(targets, n_total);
        let t_idx = scatter_table(targets, n_total);
        let r_idx = scatter_table(&rest, n_total);
        let dim = 1usize << n_total;
        let mut out = CMatrix::zeros(dim, dim);
        for &base in &r_idx {
            for (i, &ti) in t_idx.iter().enumerate() {
                for (j, &tj) in t_idx.iter().enumerate() {
                    let v = self.matrix[(i, j)];
                    if v != ZERO {
                        out[(base | ti, base | tj)] = v;
                    }
                }
            }
        }
        Ok(Self::from_matrix_unchecked(out))
    }

    /// Rank-one projector `|ψ⟩⟨ψ|`.
    pub fn projector(psi: &crate::state::StateVector) -> Operator {
        let a = psi.amplitudes();
        Self::from_matrix_unchecked(a * a.adjoint())
    }
}

pub(crate) fn check_distinct(qubits: &[usize], n: usize) -> Result<()> {
    for (k, &q) in qubits.iter().enumerate() {
        if q >= n {
            return argument(format!("qubit index {q} out of range for {n} qubits"));
        }
        if qubits[..k].contains(&q) {
            return argument(format!("qubit index {q} listed twice"));
        }
    }
    Ok(())
}

impl Mul for &Operator {
    type Output = Operator;

    fn mul(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
        Operator::from_matrix_unchecked(&self.matrix * &rhs.matrix)
    }
}

/// Kronecker product `a ⊗ b` (qubits of `a` come first).
pub fn tensor(a: &Operator, b: &Operator) -> Operator {
    a.tensor(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(m: &Operator) -> Vec<f64> {
        (0..m.dim()).map(|k| m.matrix()[(k, k)].re).collect()
    }

    #[test]
    fn sigma_z_tensor_identity() {
        let m = tensor(&Operator::pauli_z(), &Operator::identity(1));
        assert_eq!(diag(&m), vec![1.0, 1.0, -1.0, -1.0]);
        assert_eq!(m.hermiticity_defect(), 0.0);
    }

    #[test]
    fn identity_tensor_identity() {
        assert_eq!(
            tensor(&Operator::identity(1), &Operator::identity(1)),
            Operator::identity(2)
        );
    }

    #[test]
    fn basis_projectors_tensor() {
        let p0 = Operator::diagonal(&[1.0, 0.0]).unwrap();
        let p1 = Operator::diagonal(&[0.0, 1.0]).unwrap();
        let m = tensor(&p0, &p1);
        assert_eq!(diag(&m), vec![0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn raising_is_half_x_plus_iy() {
        let x = Operator::pauli_x();
        let y = Operator::pauli_y();
        let expected = (x.matrix() + y.matrix() * I) * C64::new(0.5, 0.0);
        assert_eq!(Operator::raising().matrix(), &expected);
    }

    #[test]
    fn embed_places_target_bits() {
        // X on qubit 2 of 3 flips the least significant bit
        let x2 = Operator::pauli_x().embed(&[2], 3).unwrap();
        assert_eq!(x2.matrix()[(0b001, 0b000)], ONE);
        assert_eq!(x2.matrix()[(0b100, 0b000)], ZERO);
        let x0 = Operator::pauli_x().embed(&[0], 3).unwrap();
        assert_eq!(x0, tensor(&Operator::pauli_x(), &Operator::identity(2)));
    }

    #[test]
    fn embed_rejects_bad_targets() {
        assert!(Operator::pauli_x().embed(&[3], 3).is_err());
        assert!(Operator::identity(2).embed(&[1, 1], 3).is_err());
        assert!(Operator::identity(2).embed(&[1], 3).is_err());
    }

    #[test]
    fn non_power_of_two_rejected() {
        assert!(Operator::new(CMatrix::identity(3, 3)).is_err());
        assert!(Operator::new(CMatrix::zeros(2, 4)).is_err());
    }

    #[test]
    fn gates_unitary() {
        for g in [
            Operator::hadamard(),
            Operator::pauli_y(),
            Operator::phase_s(),
        ] {
            assert!(g.is_unitary());
        }
        assert!(!Operator::raising().is_unitary());
        assert!(!Operator::raising().is_hermitian());
    }
}
