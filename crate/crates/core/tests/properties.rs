use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use grassmann::capacity::{block_weights, classical_capacity_grassmann, quantum_capacity_grassmann, LogBase};
use grassmann::channels::{complementary_channel, grassmann_channel, ChannelRep, DensityMatrix};
use grassmann::fock::{exterior_power, OccupationState, StateVector};
use grassmann::linalg::{kron, C64};
use grassmann::verify::{
    check_complementary_spectra, check_covariance, coherent_information, coherent_information_kraus,
    random_density_matrix, random_pure_state, random_unitary, trial_rng, von_neumann_entropy,
};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn random_state(modes: usize, seed: u64) -> StateVector {
    let amps = random_pure_state(1 << modes, &mut trial_rng(seed, 0));
    StateVector::from_amplitudes(
        modes,
        (0..1u64 << modes).map(|b| (OccupationState::new(modes, b).unwrap(), amps[b as usize])),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn canonical_anticommutation(modes in 1usize..=6, i in 0usize..6, j in 0usize..6, seed in any::<u64>()) {
        let (i, j) = (i % modes, j % modes);
        let s = random_state(modes, seed);
        let mixed = s.apply_creation(j).unwrap().apply_annihilation(i).unwrap()
            .axpy(C64::new(1.0, 0.0), &s.apply_annihilation(i).unwrap().apply_creation(j).unwrap()).unwrap();
        let expected = if i == j { s.clone() } else { StateVector::zero(modes).unwrap() };
        prop_assert!(mixed.max_abs_diff(&expected) < 1e-14);
        let raising = s.apply_creation(j).unwrap().apply_creation(i).unwrap()
            .axpy(C64::new(1.0, 0.0), &s.apply_creation(i).unwrap().apply_creation(j).unwrap()).unwrap();
        prop_assert!(raising.max_abs_diff(&StateVector::zero(modes).unwrap()) < 1e-14);
    }

    #[test]
    fn exterior_power_is_multiplicative(d in 1usize..=5, k in 1usize..=5, seed in any::<u64>()) {
        let k = 1 + (k - 1) % d;
        let mut rng = trial_rng(seed, 1);
        let u = random_unitary(d, &mut rng);
        let v = random_unitary(d, &mut rng);
        let lu = exterior_power(&u, k).unwrap().entries;
        let lv = exterior_power(&v, k).unwrap().entries;
        let luv = exterior_power(&(&u * &v), k).unwrap().entries;
        prop_assert!((luv - lu * lv).norm() < 1e-12);
        if k == 1 {
            prop_assert!((exterior_power(&u, 1).unwrap().entries - &u).norm() < 1e-14);
        }
        if k == d {
            let det = exterior_power(&u, d).unwrap().entries[(0, 0)];
            prop_assert!((det - u.determinant()).norm() < 1e-12);
        }
    }

    #[test]
    fn grassmann_channels_are_cptp(d in 1usize..=4, r in 0.0..FRAC_PI_2) {
        for ch in [grassmann_channel(d, r).unwrap(), complementary_channel(d, r).unwrap()] {
            prop_assert!(ch.trace_preservation_defect() < 1e-10);
            prop_assert!(ch.choi_min_eigenvalue() > -1e-10);
        }
    }

    #[test]
    fn block_weights_mirror_under_complement(d in 1usize..=40, r in 0.0..FRAC_PI_2) {
        let w = block_weights(d, r).unwrap();
        let mirrored = block_weights(d, FRAC_PI_2 - r).unwrap();
        prop_assert!((w.p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for k in 0..d {
            prop_assert!(w.p[k] >= 0.0);
            prop_assert_eq!(w.p_tilde[k], w.p[d - 1 - k]);
            prop_assert!((mirrored.p[k] - w.p_tilde[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn quantum_capacity_is_odd_about_pi_over_4(d in 2usize..=30, r in 0.0..FRAC_PI_2) {
        let q = quantum_capacity_grassmann(d, r, LogBase::D).unwrap().unclamped;
        let q_mirror = quantum_capacity_grassmann(d, FRAC_PI_2 - r, LogBase::D).unwrap().unclamped;
        prop_assert!((q + q_mirror).abs() < 1e-11);
    }

    #[test]
    fn capacities_are_ordered_and_bounded(d in 1usize..=30, r in 0.0..FRAC_PI_2) {
        let q = quantum_capacity_grassmann(d, r, LogBase::Two).unwrap().value;
        let c = classical_capacity_grassmann(d, r, LogBase::Two).unwrap();
        prop_assert!(q >= 0.0);
        prop_assert!(q <= c + 1e-12);
        prop_assert!(c <= (d as f64).log2() + 1e-12);
    }

    #[test]
    fn entropy_is_additive(n in 1usize..=4, m in 1usize..=4, seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 2);
        let rho = random_density_matrix(n, &mut rng).unwrap();
        let sigma = random_density_matrix(m, &mut rng).unwrap();
        let joint = DensityMatrix::new(kron(rho.entries(), sigma.entries()), "product").unwrap();
        let lhs = von_neumann_entropy(&joint, LogBase::Two, 2);
        let rhs = von_neumann_entropy(&rho, LogBase::Two, 2) + von_neumann_entropy(&sigma, LogBase::Two, 2);
        prop_assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn coherent_information_routes_agree(d in 1usize..=4, r in 0.0..FRAC_PI_2, seed in any::<u64>()) {
        let rho = random_density_matrix(d, &mut trial_rng(seed, 3)).unwrap();
        let g = grassmann_channel(d, r).unwrap();
        let gc = complementary_channel(d, r).unwrap();
        let via_isometry = coherent_information(d, r, &rho, LogBase::Two).unwrap();
        let via_kraus = coherent_information_kraus(&g, &gc, rho.entries(), LogBase::Two).unwrap();
        prop_assert!((via_isometry - via_kraus).abs() < 1e-10);
    }

    #[test]
    fn maximally_mixed_input_attains_capacity(d in 1usize..=4, r in 0.0..FRAC_PI_4) {
        let mixed = DensityMatrix::maximally_mixed(d, "rails").unwrap();
        let ic = coherent_information(d, r, &mixed, LogBase::Two).unwrap();
        let q = quantum_capacity_grassmann(d, r, LogBase::Two).unwrap().value;
        prop_assert!((ic - q).abs() < 1e-9);
    }

    #[test]
    fn complement_blocks_are_scaled_sector_maps(d in 1usize..=4, r in 0.0..FRAC_PI_2, seed in 0u64..1000) {
        prop_assert!(check_complementary_spectra(d, r, 3, 1e-10, seed).unwrap().pass);
    }

    #[test]
    fn covariance_holds(d in 1usize..=4, r in 0.0..FRAC_PI_2, seed in 0u64..1000) {
        prop_assert!(check_covariance(d, r, 3, 1e-9, seed).unwrap().pass);
    }

    #[test]
    fn channel_json_round_trip(d in 1usize..=4, r in 0.0..FRAC_PI_2) {
        let ch = grassmann_channel(d, r).unwrap();
        let text = serde_json::to_string(&ch.to_dump()).unwrap();
        let back = ChannelRep::from_dump(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert!((back.choi() - ch.choi()).norm() < 1e-12);
        prop_assert_eq!(back.blocks(), ch.blocks());
    }
}

#[test]
fn pure_input_entropy_is_zero_and_mixed_is_log_dimension() {
    let psi = random_pure_state(3, &mut trial_rng(0, 0));
    let pure = DensityMatrix::pure(&psi, "rails").unwrap();
    assert!(von_neumann_entropy(&pure, LogBase::Two, 3).abs() < 1e-12);
    let mixed = DensityMatrix::maximally_mixed(5, "rails").unwrap();
    assert!((von_neumann_entropy(&mixed, LogBase::D, 5) - 1.0).abs() < 1e-12);
}
