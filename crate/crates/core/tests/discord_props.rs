mod common;

use common::{classical_state, local_on, random_density};
use mixstate::discord::{
    discord, mutual_information, optimize_classical_j, DiscordSettings, OptimizerSettings,
};
use mixstate::dqc1::random_unitary;
use mixstate::Bipartition;

fn cut() -> Bipartition {
    Bipartition::one_vs_rest(2, 0).unwrap()
}

#[test]
fn classical_states_have_no_discord() {
    for seed in 0..100u64 {
        let rho = classical_state(seed);
        let i = mutual_information(&rho, &cut()).unwrap();
        let j = optimize_classical_j(&rho, &cut(), &OptimizerSettings::default())
            .unwrap()
            .j_max;
        assert!((i - j).abs() <= 1e-6, "seed {seed}: I = {i}, J_max = {j}");
    }
}

#[test]
fn discord_is_nonnegative() {
    for seed in 0..40u64 {
        let rho = if seed % 2 == 0 {
            random_density(2, seed)
        } else {
            classical_state(seed)
        };
        let d = discord(&rho, &cut(), &DiscordSettings::default()).unwrap();
        assert!(d.d_standard >= -1e-8, "seed {seed}: {}", d.d_standard);
    }
}

#[test]
fn j_max_invariant_under_local_unitary_on_y() {
    for seed in 0..20u64 {
        let rho = random_density(2, seed);
        let v = local_on(&random_unitary(2, 1000 + seed).unwrap(), 1, 2);
        let rotated = rho.apply_unitary(&v).unwrap();
        let settings = OptimizerSettings::default();
        let a = optimize_classical_j(&rho, &cut(), &settings).unwrap().j_max;
        let b = optimize_classical_j(&rotated, &cut(), &settings)
            .unwrap()
            .j_max;
        assert!((a - b).abs() <= 1e-6, "seed {seed}: {a} vs {b}");
    }
}

#[test]
fn grid_refinement_never_loses() {
    for seed in 0..10u64 {
        let rho = random_density(2, 500 + seed);
        let base = OptimizerSettings::default();
        let doubled = OptimizerSettings {
            theta_points: 2 * base.theta_points,
            phi_points: 2 * base.phi_points,
            ..base
        };
        let a = optimize_classical_j(&rho, &cut(), &base).unwrap().j_max;
        let b = optimize_classical_j(&rho, &cut(), &doubled).unwrap().j_max;
        assert!(b >= a - 1e-9, "seed {seed}: {b} < {a}");
    }
}
