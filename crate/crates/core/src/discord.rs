//! Quantum mutual information, measured classical correlation and quantum
//! discord.
//!
//! For a cut `X | Y` the mutual information is `I = H(X) + H(Y) - H(X,Y)` and
//! the classical correlation measured through a projective measurement of
//! `Y` is `J = H(X) - H(X|Y)`, with `H(X|Y) = Σ_j p_j H(ρ_{X|j})`. Discord is
//! reported both as `I - J_max` (nonnegative) and with the opposite sign.
//!
//! `Y` (side B of the cut) must be a single qubit.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{argument, Error, Result};
use crate::linalg::{eig_hermitian, qubit_mask, scatter_table, CMatrix, C64, ZERO};
use crate::state::{entropy_of_spectrum, Bipartition, DensityMatrix};

/// Outcomes less likely than this contribute nothing to `H(X|Y)`.
const OUTCOME_FLOOR: f64 = 1e-12;

/// A rank-one projective measurement `{Π₊, Π₋}` of one qubit along the
/// Bloch direction `(θ, φ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectiveBasis {
    pub theta: f64,
    pub phi: f64,
}

impl ProjectiveBasis {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return argument(format!("theta must lie in [0, π], got {theta}"));
        }
        if !phi.is_finite() {
            return argument("phi must be finite");
        }
        Ok(Self {
            theta,
            phi: phi.rem_euclid(TAU),
        })
    }

    /// Measurement of `σ_z`.
    pub fn z() -> Self {
        Self {
            theta: 0.0,
            phi: 0.0,
        }
    }

    /// Reflect an arbitrary `(θ, φ)` onto the canonical chart.
    fn wrapped(theta: f64, phi: f64) -> Self {
        let mut theta = theta.rem_euclid(TAU);
        let mut phi = phi;
        if theta > PI {
            theta = TAU - theta;
            phi += PI;
        }
        Self {
            theta,
            phi: phi.rem_euclid(TAU),
        }
    }

    /// The eigenvectors `|+n⟩, |-n⟩` of `n·σ`.
    pub fn vectors(&self) -> [[C64; 2]; 2] {
        let (c, s) = ((self.theta / 2.0).cos(), (self.theta / 2.0).sin());
        let e = C64::from_polar(1.0, self.phi);
        [[C64::new(c, 0.0), e * s], [-e.conj() * s, C64::new(c, 0.0)]]
    }

    pub fn projectors(&self) -> [CMatrix; 2] {
        self.vectors()
            .map(|v| CMatrix::from_fn(2, 2, |r, c| v[r] * v[c].conj()))
    }
}

/// Precomputed index tables for conditioning `X` on outcomes of qubit `Y`.
struct Conditioner<'a> {
    rho: &'a CMatrix,
    x_idx: Vec<usize>,
    y_mask: usize,
    h_x: f64,
}

impl<'a> Conditioner<'a> {
    fn new(rho: &'a DensityMatrix, cut: &Bipartition) -> Result<Self> {
        rho.check_cut(cut)?;
        let [y] = cut.side_b() else {
            return Err(Error::Unsupported(format!(
                "measured subsystem must be a single qubit, cut has {} qubits on side B",
                cut.side_b().len()
            )));
        };
        let n = rho.n_qubits();
        let h_x = rho.partial_trace(cut.side_a())?.entropy();
        Ok(Self {
            rho: rho.matrix(),
            x_idx: scatter_table(cut.side_a(), n),
            y_mask: qubit_mask(*y, n),
            h_x,
        })
    }

    /// `p · ρ_{X|v} = ⟨v|_Y ρ |v⟩_Y`.
    fn conditioned(&self, v: &[C64; 2]) -> CMatrix {
        let d = self.x_idx.len();
        let ys = [0, self.y_mask];
        CMatrix::from_fn(d, d, |i, j| {
            let mut acc = ZERO;
            for (s, &ys_) in ys.iter().enumerate() {
                for (t, &yt) in ys.iter().enumerate() {
                    acc += v[s].conj() * self.rho[(self.x_idx[i] | ys_, self.x_idx[j] | yt)] * v[t];
                }
            }
            acc
        })
    }

    fn conditional_entropy(&self, basis: &ProjectiveBasis) -> f64 {
        basis
            .vectors()
            .iter()
            .map(|v| {
                let m = self.conditioned(v);
                let p = m.trace().re;
                if p < OUTCOME_FLOOR {
                    return 0.0;
                }
                let spectrum = eig_hermitian(&m).expect("conditional states are Hermitian");
                let normalized: Vec<f64> = spectrum.iter().map(|l| l / p).collect();
                p * entropy_of_spectrum(&normalized)
            })
            .sum()
    }

    fn classical_j(&self, basis: &ProjectiveBasis) -> f64 {
        self.h_x - self.conditional_entropy(basis)
    }
}

/// `H(X) + H(Y) - H(X,Y)` in bits, with `X` side A and `Y` side B.
pub fn mutual_information(rho: &DensityMatrix, cut: &Bipartition) -> Result<f64> {
    rho.check_cut(cut)?;
    let h_x = rho.partial_trace(cut.side_a())?.entropy();
    let h_y = rho.partial_trace(cut.side_b())?.entropy();
    Ok(h_x + h_y - rho.entropy())
}

/// `H(X|Y)` for a projective measurement of the single qubit `Y`.
pub fn conditional_entropy(
    rho: &DensityMatrix,
    cut: &Bipartition,
    basis: &ProjectiveBasis,
) -> Result<f64> {
    Ok(Conditioner::new(rho, cut)?.conditional_entropy(basis))
}

/// `J = H(X) - H(X|Y)` for the given measurement basis.
pub fn classical_j(rho: &DensityMatrix, cut: &Bipartition, basis: &ProjectiveBasis) -> Result<f64> {
    Ok(Conditioner::new(rho, cut)?.classical_j(basis))
}

/// Search parameters for maximizing `J` over measurement bases.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerSettings {
    /// Polar grid points, poles included.
    pub theta_points: usize,
    /// Azimuthal grid points over `[0, 2π)`.
    pub phi_points: usize,
    /// Pattern-search iterations after the grid.
    pub refine_iters: usize,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            theta_points: 64,
            phi_points: 128,
            refine_iters: 200,
        }
    }
}

impl OptimizerSettings {
    fn validate(&self) -> Result<()> {
        if self.theta_points < 2 || self.phi_points < 1 {
            return argument(format!(
                "grid needs at least 2 theta points and 1 phi point, got {}x{}",
                self.theta_points, self.phi_points
            ));
        }
        Ok(())
    }

    fn theta_step(&self) -> f64 {
        PI / (self.theta_points - 1) as f64
    }

    fn phi_step(&self) -> f64 {
        TAU / self.phi_points as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JOptimum {
    pub j_max: f64,
    pub basis: ProjectiveBasis,
}

/// Maximize `J` over single-qubit projective measurements of `Y`: exhaustive
/// `(θ, φ)` grid, then a compass search from the best grid point that halves
/// its step whenever no neighbour improves. Ties go to the lowest grid index,
/// so the result does not depend on evaluation order.
pub fn optimize_classical_j(
    rho: &DensityMatrix,
    cut: &Bipartition,
    settings: &OptimizerSettings,
) -> Result<JOptimum> {
    settings.validate()?;
    let cond = Conditioner::new(rho, cut)?;
    let (dt, dp) = (settings.theta_step(), settings.phi_step());
    let np = settings.phi_points;
    let grid_basis = |k: usize| ProjectiveBasis {
        theta: (k / np) as f64 * dt,
        phi: (k % np) as f64 * dp,
    };
    let values = crate::par::map_indexed(settings.theta_points * np, |k| {
        cond.classical_j(&grid_basis(k))
    });
    let (best_k, &best_j) = values
        .iter()
        .enumerate()
        .fold(None, |acc: Option<(usize, &f64)>, (k, v)| match acc {
            Some((_, b)) if *v <= *b => acc,
            _ => Some((k, v)),
        })
        .expect("grid is nonempty");

    let mut basis = grid_basis(best_k);
    let mut j = best_j;
    let (mut st, mut sp) = (dt, dp);
    for _ in 0..settings.refine_iters {
        if st < 1e-14 && sp < 1e-14 {
            break;
        }
        let candidates = [
            (basis.theta + st, basis.phi),
            (basis.theta - st, basis.phi),
            (basis.theta, basis.phi + sp),
            (basis.theta, basis.phi - sp),
        ];
        let mut improved = false;
        for (t, p) in candidates {
            let b = ProjectiveBasis::wrapped(t, p);
            let v = cond.classical_j(&b);
            if v > j {
                j = v;
                basis = b;
                improved = true;
            }
        }
        if !improved {
            st *= 0.5;
            sp *= 0.5;
        }
    }
    Ok(JOptimum { j_max: j, basis })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DiscordSettings {
    pub optimizer: OptimizerSettings,
    /// Basis at which `J_at_basis` is reported; `σ_z` when absent.
    pub basis: Option<ProjectiveBasis>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscordReport {
    #[serde(rename = "I")]
    pub mutual_information: f64,
    #[serde(rename = "J_at_basis")]
    pub j_at_basis: f64,
    pub basis: ProjectiveBasis,
    #[serde(rename = "J_max")]
    pub j_max: f64,
    pub basis_argmax: ProjectiveBasis,
    /// `I - J_max`, clipped to 0 when within `1e-8` below zero.
    #[serde(rename = "D_standard")]
    pub d_standard: f64,
    /// `J_max - I`.
    #[serde(rename = "D_reversed_sign")]
    pub d_reversed_sign: f64,
    pub cut: Bipartition,
}

pub fn discord(
    rho: &DensityMatrix,
    cut: &Bipartition,
    settings: &DiscordSettings,
) -> Result<DiscordReport> {
    let basis = settings.basis.unwrap_or_else(ProjectiveBasis::z);
    let cond = Conditioner::new(rho, cut)?;
    let j_at_basis = cond.classical_j(&basis);
    let opt = optimize_classical_j(rho, cut, &settings.optimizer)?;
    let (j_max, basis_argmax) = if j_at_basis > opt.j_max {
        (j_at_basis, basis)
    } else {
        (opt.j_max, opt.basis)
    };
    let i = mutual_information(rho, cut)?;
    let raw = i - j_max;
    let d_standard = if (-1e-8..0.0).contains(&raw) {
        0.0
    } else {
        raw
    };
    Ok(DiscordReport {
        mutual_information: i,
        j_at_basis,
        basis,
        j_max,
        basis_argmax,
        d_standard,
        d_reversed_sign: j_max - i,
        cut: cut.clone(),
    })
}
