// SPDX-License-Identifier: Apache-2.0

//! Solver results against brute-force references.

use rand::Rng;
use thermowit_core::heat::ladder::{
    asymptotic_row, beta_c_asymptotic, ho_constraint_objective, two_ladder_hamiltonian,
};
use thermowit_core::heat::oracle::{heat_bounds_oracle, OracleOptions};
use thermowit_core::heat::{find_beta_roots, heat_bounds, ScalarProblem};
use thermowit_core::random::{random_levels_with, random_pure_state_with, random_state_with, rng_from_seed};
use thermowit_core::thermo::{conditional_entropy, gibbs_state};
use thermowit_core::witness::isotropic::isotropic_state;
use thermowit_core::witness::{
    detect, incoh_free_energy_bound, local_data, sep_free_energy_bound, witness_heat_bounds, DEFAULT_MARGIN,
};
use thermowit_core::{DensityMatrix, Hamiltonian};

fn check_against_oracle(rho: &DensityMatrix, h: &Hamiltonian, beta: f64, samples: usize, seed: u64) {
    let b = heat_bounds(rho, h, beta).unwrap();
    let o = heat_bounds_oracle(rho, h, beta, &OracleOptions { samples, seed, ..Default::default() }).unwrap();
    assert!((b.q_c - o.q_c).abs() <= 1e-6, "q_c {} vs oracle {}", b.q_c, o.q_c);
    assert!((b.q_h - o.q_h).abs() <= 1e-6, "q_h {} vs oracle {}", b.q_h, o.q_h);
    assert!(o.max_excess <= 1e-6, "sampled state beat the Gibbs optimum by {}", o.max_excess);
}

#[test]
fn random_qubits_match_oracle() {
    let h = Hamiltonian::from_levels(&[0.0, 1.0]).unwrap();
    let mut rng = rng_from_seed(101);
    for i in 0..100 {
        let rho = random_state_with(&mut rng, &[2]).unwrap();
        check_against_oracle(&rho, &h, 1.0, 40, i);
    }
}

#[test]
fn random_qutrits_match_oracle() {
    let h = Hamiltonian::from_levels(&[0.0, 1.0, 2.0]).unwrap();
    let mut rng = rng_from_seed(202);
    for i in 0..50 {
        let rho = random_state_with(&mut rng, &[3]).unwrap();
        check_against_oracle(&rho, &h, 1.0, 40, i);
    }
}

#[test]
fn higher_dimensions_match_oracle() {
    let mut rng = rng_from_seed(303);
    for dim in [5usize, 7, 9] {
        for i in 0..4 {
            let levels = random_levels_with(&mut rng, dim, 3.0);
            let h = Hamiltonian::from_levels(&levels).unwrap();
            let rho = if i % 2 == 0 {
                random_state_with(&mut rng, &[dim]).unwrap()
            } else {
                random_pure_state_with(&mut rng, &[dim]).unwrap()
            };
            let beta = rng.random_range(0.3..3.0);
            check_against_oracle(&rho, &h, beta, 40, i);
        }
    }
}

#[test]
fn ground_state_qubit_matches_oracle() {
    let h = Hamiltonian::from_levels(&[0.0, 1.0]).unwrap();
    let rho = DensityMatrix::basis_state(0, vec![2]).unwrap();
    check_against_oracle(&rho, &h, 1.0, 200, 9);
    let b = heat_bounds(&rho, &h, 1.0).unwrap();
    assert!((b.q_c + 0.649).abs() < 2e-3);
}

#[test]
fn ladder_constraint_vanishes_at_generic_root() {
    let h = two_ladder_hamiltonian(3).unwrap();
    let p = ScalarProblem::new(&h, 2.0, 3f64.ln(), 0.5).unwrap();
    let roots = find_beta_roots(&p).unwrap();
    let at = ho_constraint_objective(roots.beta_c, &p, 2, 3).unwrap();
    assert!(at.constraint.abs() < 1e-9, "constraint {}", at.constraint);
    let x = roots.beta_h.unwrap();
    assert!(ho_constraint_objective(x, &p, 2, 3).unwrap().constraint.abs() < 1e-9);
}

#[test]
fn ladder_objective_is_nondecreasing() {
    let h = two_ladder_hamiltonian(4).unwrap();
    let p = ScalarProblem::new(&h, 3.0, 1.0, 1.0).unwrap();
    let mut prev = f64::NEG_INFINITY;
    for k in 0..=2000 {
        let bt = -20.0 + 40.0 * k as f64 / 2000.0;
        let obj = ho_constraint_objective(bt, &p, 2, 4).unwrap().objective;
        assert!(obj >= prev - 1e-12, "objective decreased at {bt}");
        prev = obj;
    }
}

#[test]
fn asymptotic_values_and_accuracy() {
    assert!((beta_c_asymptotic(2, 10.0).unwrap() - 0.138629436).abs() < 1e-9);
    assert!((beta_c_asymptotic(5, 10.0).unwrap() - 0.040235948).abs() < 1e-9);
    for d in 2..=5 {
        let mut prev = f64::INFINITY;
        for beta in [10.0, 20.0, 50.0] {
            let row = asymptotic_row(d, beta, None).unwrap();
            assert!(row.rel_err <= 0.10, "d={d} β={beta}: {}", row.rel_err);
            assert!(row.rel_err <= prev);
            prev = row.rel_err;
        }
    }
}

#[test]
fn pure_entangled_states_are_detected() {
    let mut rng = rng_from_seed(404);
    for d in [2usize, 3] {
        let local = Hamiltonian::ladder(d).unwrap();
        let h = Hamiltonian::local_sum(&[local.clone(), local.clone()]).unwrap();
        for _ in 0..30 {
            let rho = random_pure_state_with(&mut rng, &[d, d]).unwrap();
            assert!(conditional_entropy(&rho, &[0], &[1]).unwrap() < 0.0);
            let data = local_data(&rho, &[local.clone(), local.clone()]).unwrap();
            let env = witness_heat_bounds(&sep_free_energy_bound(&data, 1.0).unwrap(), &h, 1.0).unwrap();
            let b = heat_bounds(&rho, &h, 1.0).unwrap();
            assert!(detect(&b, &env, DEFAULT_MARGIN).is_detected());
        }
    }
}

#[test]
fn separable_example_pipeline() {
    let local = Hamiltonian::ladder(2).unwrap();
    let h = Hamiltonian::local_sum(&[local.clone(), local.clone()]).unwrap();
    let bell = isotropic_state(2, 0.0).unwrap();
    let data = local_data(&bell, &[local.clone(), local]).unwrap();
    let env = witness_heat_bounds(&sep_free_energy_bound(&data, 0.5).unwrap(), &h, 0.5).unwrap();
    let b = heat_bounds(&bell, &h, 0.5).unwrap();
    assert_eq!(b.q_h, 1.0);
    assert!(b.q_h > env.q_star_h + DEFAULT_MARGIN);
}

#[test]
fn incoherent_envelope_at_gibbs_energy_is_zero() {
    for dim in [2usize, 3] {
        let h = Hamiltonian::ladder(dim).unwrap();
        let g = gibbs_state(&h, 0.8).unwrap();
        let e = g.matrix().trace_product(h.matrix()).re;
        let env = witness_heat_bounds(&incoh_free_energy_bound(e, &h, 0.8).unwrap(), &h, 0.8).unwrap();
        if dim == 2 {
            assert_eq!((env.q_star_c, env.q_star_h), (0.0, 0.0));
        } else {
            // Above two levels the entropy floor is below S(γ), so the envelope opens up.
            assert!(env.q_star_c < 0.0 && env.q_star_h > 0.0);
        }
    }
}
