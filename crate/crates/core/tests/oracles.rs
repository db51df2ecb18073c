//! Sparse constructions against dense Jordan-Wigner matrices.

use grassmann::channels::{grassmann_channel, modes_from_rails, DensityMatrix};
use grassmann::fock::{
    basis_states, exterior_power, isometry_apply, mode_of_rail, rail_of_mode, squeezed_vacuum, StateVector,
};
use grassmann::linalg::{hermitian_eigenvalues, partial_trace_first, CMatrix, CVector, C64};
use grassmann::verify::oracle::{dense_creation, oracle_isometry_apply, oracle_squeezed_vacuum, to_dense};
use grassmann::verify::{random_pure_state, random_unitary, trial_rng};

fn max_diff(a: &CVector, b: &CVector) -> f64 {
    (a - b).iter().fold(0.0, |m, z| m.max(z.norm()))
}

#[test]
fn squeezed_vacuum_matches_dense_exponential() {
    for d in 1..=4 {
        for r in [0.0, 0.3, 0.785, 1.3] {
            let sparse = to_dense(&squeezed_vacuum(d, r).unwrap());
            let dense = oracle_squeezed_vacuum(d, r).unwrap();
            assert!(max_diff(&sparse, &dense) < 1e-12, "d={d} r={r}");
        }
    }
}

#[test]
fn isometry_matches_dense_exponential_on_random_inputs() {
    for d in 1..=4 {
        for t in 0..5 {
            let mut rng = trial_rng(99, t);
            let psi = random_pure_state(d, &mut rng);
            let beta = modes_from_rails(&psi);
            let r = 0.25 * (t + 1) as f64;
            let sparse = to_dense(&isometry_apply(d, r, &beta).unwrap());
            let dense = oracle_isometry_apply(d, r, &beta).unwrap();
            assert!(max_diff(&sparse, &dense) < 1e-12, "d={d} trial {t}");
        }
    }
}

/// Channel output from the dense isometry image, reduced onto the `A` modes.
fn dense_channel_output(d: usize, r: f64, psi: &CVector) -> CMatrix {
    let v = oracle_isometry_apply(d, r, &modes_from_rails(psi)).unwrap();
    // A modes are the low bits, so the C register is the first factor.
    let joint = &v * v.adjoint();
    partial_trace_first(&joint, 1 << d, 1 << d)
}

#[test]
fn channel_spectrum_matches_dense_reduction() {
    for d in 2..=3 {
        let ch = grassmann_channel(d, 0.6).unwrap();
        for t in 0..4 {
            let psi = random_pure_state(d, &mut trial_rng(5, t));
            let out = ch.apply(&DensityMatrix::pure(&psi, "rails").unwrap()).unwrap();
            let mut ours = hermitian_eigenvalues(out.entries());
            let mut dense = hermitian_eigenvalues(&dense_channel_output(d, 0.6, &psi));
            ours.retain(|x| x.abs() > 1e-12);
            dense.retain(|x| x.abs() > 1e-12);
            assert_eq!(ours.len(), dense.len());
            for (a, b) in ours.iter().zip(&dense) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn exterior_power_matches_rotated_slater_determinants() {
    for d in 1..=4 {
        let u = random_unitary(d, &mut trial_rng(31, d as u64));
        // Rotated creation operator of rail j, as a dense matrix on d modes.
        let rotated: Vec<CMatrix> = (0..d)
            .map(|j| {
                (0..d).fold(CMatrix::zeros(1 << d, 1 << d), |acc, i| {
                    acc + dense_creation(d, mode_of_rail(d, i)).unwrap() * u[(i, j)]
                })
            })
            .collect();
        for k in 1..=d {
            let lk = exterior_power(&u, k).unwrap().entries;
            let states = basis_states(d, k).unwrap();
            for (s_idx, s) in states.iter().enumerate() {
                // a_{m1}† ... a_{mk}† |vac> with m1 < ... < mk is +|S>.
                let mut v = CVector::zeros(1 << d);
                v[0] = C64::new(1.0, 0.0);
                for m in (0..d).rev().filter(|&m| s.is_occupied(m)) {
                    v = &rotated[rail_of_mode(d, m)] * v;
                }
                for (t_idx, t) in states.iter().enumerate() {
                    let diff = (v[t.bits() as usize] - lk[(t_idx, s_idx)]).norm();
                    assert!(diff < 1e-12, "d={d} k={k} S={s} T={t}: {diff:e}");
                }
            }
        }
    }
}

#[test]
fn ladder_operators_match_dense_matrices() {
    let d = 4;
    let mut rng = trial_rng(8, 0);
    let amps = random_pure_state(1 << d, &mut rng);
    let state = StateVector::from_amplitudes(
        d,
        (0..1u64 << d).map(|b| (grassmann::fock::OccupationState::new(d, b).unwrap(), amps[b as usize])),
    )
    .unwrap();
    for mode in 0..d {
        let a_dag = dense_creation(d, mode).unwrap();
        let sparse_up = to_dense(&state.apply_creation(mode).unwrap());
        assert!(max_diff(&sparse_up, &(&a_dag * &amps)) < 1e-14);
        let sparse_down = to_dense(&state.apply_annihilation(mode).unwrap());
        assert!(max_diff(&sparse_down, &(a_dag.adjoint() * &amps)) < 1e-14);
    }
}
