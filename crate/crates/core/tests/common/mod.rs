#![allow(dead_code)]

use mixstate::dqc1::random_unitary;
use mixstate::{CMatrix, DensityMatrix, Operator, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

pub fn gaussian_matrix(dim: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    CMatrix::from_fn(dim, dim, |_, _| {
        C64::new(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        )
    })
}

/// Full-rank random state `G G† / Tr(G G†)`.
pub fn random_density(n: usize, seed: u64) -> DensityMatrix {
    let g = gaussian_matrix(1 << n, seed);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.unscale(tr)).unwrap()
}

pub fn random_hermitian(dim: usize, seed: u64) -> CMatrix {
    let g = gaussian_matrix(dim, seed);
    (&g + g.adjoint()).scale(0.5)
}

pub fn random_probs(k: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..k).map(|_| rng.random::<f64>() + 1e-3).collect();
    let s: f64 = raw.iter().sum();
    raw.iter().map(|x| x / s).collect()
}

/// Two-qubit state diagonal in the product basis `{U|i⟩ ⊗ V|j⟩}`.
pub fn classical_state(seed: u64) -> DensityMatrix {
    let diag = DensityMatrix::diagonal(&random_probs(4, seed)).unwrap();
    let local = random_unitary(2, seed ^ 0xA5A5)
        .unwrap()
        .tensor(&random_unitary(2, seed ^ 0x5A5A).unwrap());
    diag.apply_unitary(&local).unwrap()
}

pub fn local_on(u: &Operator, qubit: usize, n: usize) -> Operator {
    u.embed(&[qubit], n).unwrap()
}
