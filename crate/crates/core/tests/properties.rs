// SPDX-License-Identifier: Apache-2.0

use proptest::prelude::*;
use thermowit_core::heat::{f_function, find_beta_roots, heat_bounds, root_consistency_defect, ScalarProblem};
use thermowit_core::linalg::{ComplexMatrix, C64};
use thermowit_core::random::{
    random_incoherent_state_with, random_levels_with, random_pure_state_with, random_separable_state_with,
    random_state_with, rng_from_seed,
};
use thermowit_core::thermo::{free_energy, relative_entropy, von_neumann_entropy, GibbsFamily};
use thermowit_core::witness::{
    detect, incoh_free_energy_bound, local_data, sep_free_energy_bound, witness_heat_bounds, DEFAULT_MARGIN,
};
use thermowit_core::{partial_trace, DensityMatrix, Hamiltonian, Verdict};

fn state_and_hamiltonian(seed: u64, dim: usize) -> (DensityMatrix, Hamiltonian) {
    let mut rng = rng_from_seed(seed);
    let levels = random_levels_with(&mut rng, dim, 2.0);
    let h = Hamiltonian::from_levels(&levels).unwrap();
    let rho = match seed % 3 {
        0 => random_state_with(&mut rng, &[dim]).unwrap(),
        1 => random_incoherent_state_with(&mut rng, &h).unwrap(),
        _ => {
            let pure = random_pure_state_with(&mut rng, &[dim]).unwrap();
            let mixed = random_state_with(&mut rng, &[dim]).unwrap();
            DensityMatrix::mixture(&[(0.7, pure), (0.3, mixed)]).unwrap()
        }
    };
    (rho, h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn bounds_straddle_zero_and_roots_straddle_beta(seed in any::<u64>(), dim in 2usize..7, beta in 0.2f64..4.0) {
        let (rho, h) = state_and_hamiltonian(seed, dim);
        let b = heat_bounds(&rho, &h, beta).unwrap();
        prop_assert!(b.q_c <= 1e-12 && b.q_h >= -1e-12);
        let e = rho.matrix().trace_product(h.matrix()).re;
        prop_assert!(b.q_h <= e + 1e-9);
        prop_assert!(b.beta_c <= beta);
        if let Some(x) = b.beta_h {
            prop_assert!(x >= beta);
        }
    }

    #[test]
    fn f_sign_pattern_and_root_count(seed in any::<u64>(), dim in 2usize..6, beta in 0.2f64..4.0) {
        let (rho, h) = state_and_hamiltonian(seed, dim);
        let p = ScalarProblem::from_state(&rho, &h, beta).unwrap();
        let y = p.free_energy();
        prop_assert!(f_function(beta, y, &h, beta).unwrap() >= -1e-12);
        let limit = p.x_limit();
        let n = 4000;
        let mut changes = 0;
        let mut prev = f_function(-limit, y, &h, beta).unwrap();
        for k in 1..=n {
            let x = -limit + 2.0 * limit * k as f64 / n as f64;
            let cur = f_function(x, y, &h, beta).unwrap();
            if (prev > 0.0) != (cur > 0.0) {
                changes += 1;
            }
            prev = cur;
        }
        prop_assert!(changes <= 2);
    }

    #[test]
    fn consistency_identity_holds_at_roots(seed in any::<u64>(), dim in 2usize..8, beta in 0.2f64..4.0) {
        let (rho, h) = state_and_hamiltonian(seed, dim);
        let p = ScalarProblem::from_state(&rho, &h, beta).unwrap();
        let r = find_beta_roots(&p).unwrap();
        if r.beta_c.is_finite() {
            prop_assert!(root_consistency_defect(&p, r.beta_c) <= 1e-8);
        }
        if let Some(x) = r.beta_h {
            prop_assert!(root_consistency_defect(&p, x) <= 1e-8);
        }
    }

    #[test]
    fn larger_free_energy_widens_the_roots(seed in any::<u64>(), dim in 2usize..6, beta in 0.2f64..4.0, shrink in 0.0f64..1.0) {
        let (rho, h) = state_and_hamiltonian(seed, dim);
        let outer = ScalarProblem::from_state(&rho, &h, beta).unwrap();
        // Same energy, less entropy: a larger free energy.
        let inner_s = outer.entropy * shrink;
        let inner = ScalarProblem::new(&h, outer.energy, inner_s, beta).unwrap();
        let (a, b) = (find_beta_roots(&outer).unwrap(), find_beta_roots(&inner).unwrap());
        prop_assert!(b.beta_c <= a.beta_c + 1e-9 * a.beta_c.abs().max(1.0));
        match (a.beta_h, b.beta_h) {
            (Some(xa), Some(xb)) => prop_assert!(xb >= xa - 1e-9 * xa.abs().max(1.0)),
            (None, Some(_)) => prop_assert!(false, "right root reappeared at larger free energy"),
            _ => {}
        }
    }

    #[test]
    fn invariant_under_energy_diagonal_unitaries(seed in any::<u64>(), dim in 2usize..6, beta in 0.2f64..4.0) {
        let (rho, h) = state_and_hamiltonian(seed, dim);
        let phases: Vec<f64> = (0..dim).map(|k| 0.7 * k as f64 + (seed % 97) as f64 * 0.013).collect();
        let diag: Vec<C64> = phases.iter().map(|&p| C64::from_polar(1.0, p)).collect();
        let u = h.spectrum().with_weights(&diag);
        let rotated = rho.evolve(&u);
        let (a, b) = (heat_bounds(&rho, &h, beta).unwrap(), heat_bounds(&rotated, &h, beta).unwrap());
        prop_assert!((a.q_c - b.q_c).abs() <= 1e-9);
        prop_assert!((a.q_h - b.q_h).abs() <= 1e-9);
    }

    #[test]
    fn heats_scale_with_the_hamiltonian(seed in any::<u64>(), dim in 2usize..6, beta in 0.2f64..4.0, c in 0.1f64..10.0) {
        let (rho, h) = state_and_hamiltonian(seed, dim);
        let hc = h.scaled(c).unwrap();
        let (a, b) = (heat_bounds(&rho, &h, beta).unwrap(), heat_bounds(&rho, &hc, beta / c).unwrap());
        let tol = 1e-9 * c.max(1.0);
        prop_assert!((c * a.q_c - b.q_c).abs() <= tol, "{} vs {}", c * a.q_c, b.q_c);
        prop_assert!((c * a.q_h - b.q_h).abs() <= tol, "{} vs {}", c * a.q_h, b.q_h);
    }

    #[test]
    fn separable_members_satisfy_the_bound(seed in any::<u64>(), beta in 0.2f64..3.0, k in 1usize..5) {
        let mut rng = rng_from_seed(seed);
        let local = Hamiltonian::ladder(2).unwrap();
        let h = Hamiltonian::local_sum(&[local.clone(), local.clone()]).unwrap();
        let rho = random_separable_state_with(&mut rng, &[2, 2], k).unwrap();
        let data = local_data(&rho, &[local.clone(), local]).unwrap();
        let bound = sep_free_energy_bound(&data, beta).unwrap();
        prop_assert!(free_energy(&rho, &h, beta).unwrap() <= bound.f_star + 1e-9);
        prop_assert!(bound.s_floor <= von_neumann_entropy(&rho) + 1e-9);
        let env = witness_heat_bounds(&bound, &h, beta).unwrap();
        prop_assert!(env.q_star_c <= 0.0 && env.q_star_h >= 0.0);
        prop_assert!(env.q_star_h <= env.e_cap + 1e-9);
        let b = heat_bounds(&rho, &h, beta).unwrap();
        prop_assert_eq!(detect(&b, &env, DEFAULT_MARGIN), Verdict::Inside);
    }

    #[test]
    fn incoherent_members_satisfy_the_bound(seed in any::<u64>(), dim in 2usize..6, beta in 0.2f64..3.0) {
        let mut rng = rng_from_seed(seed);
        let levels = random_levels_with(&mut rng, dim, 2.0);
        let h = Hamiltonian::from_levels(&levels).unwrap();
        let rho = random_incoherent_state_with(&mut rng, &h).unwrap();
        let e = rho.matrix().trace_product(h.matrix()).re;
        let bound = incoh_free_energy_bound(e, &h, beta).unwrap();
        prop_assert!(free_energy(&rho, &h, beta).unwrap() <= bound.f_star + 1e-9);
        prop_assert!(bound.s_floor <= von_neumann_entropy(&rho) + 1e-9);
        let env = witness_heat_bounds(&bound, &h, beta).unwrap();
        let b = heat_bounds(&rho, &h, beta).unwrap();
        prop_assert_eq!(detect(&b, &env, DEFAULT_MARGIN), Verdict::Inside);
    }

    #[test]
    fn entropies_and_divergences_in_range(seed in any::<u64>(), dim in 2usize..7) {
        let mut rng = rng_from_seed(seed);
        let rho = random_state_with(&mut rng, &[dim]).unwrap();
        let sigma = random_state_with(&mut rng, &[dim]).unwrap();
        let s = von_neumann_entropy(&rho);
        prop_assert!(s >= -1e-12 && s <= (dim as f64).ln() + 1e-12);
        prop_assert!(relative_entropy(&rho, &sigma).unwrap() >= -1e-10);
    }

    #[test]
    fn partial_trace_of_product_returns_factors(seed in any::<u64>(), da in 2usize..4, db in 2usize..4) {
        let mut rng = rng_from_seed(seed);
        let a = random_state_with(&mut rng, &[da]).unwrap();
        let b = random_state_with(&mut rng, &[db]).unwrap();
        let ab = a.tensor(&b);
        let ra = partial_trace(&ab, &[0]).unwrap();
        let rb = partial_trace(&ab, &[1]).unwrap();
        prop_assert!((ra.matrix() - a.matrix()).max_abs() <= 1e-12);
        prop_assert!((rb.matrix() - b.matrix()).max_abs() <= 1e-12);
    }

    #[test]
    fn gibbs_free_energy_is_minimal(seed in any::<u64>(), dim in 2usize..6, beta in 0.2f64..4.0) {
        let (rho, h) = state_and_hamiltonian(seed, dim);
        let gibbs = GibbsFamily::of(&h).free_energy(beta, beta);
        prop_assert!(free_energy(&rho, &h, beta).unwrap() >= gibbs - 1e-12);
    }
}

#[test]
fn diagonal_unitary_commutes_with_hamiltonian() {
    let h = Hamiltonian::from_levels(&[0.0, 0.4, 1.1]).unwrap();
    let diag: Vec<C64> = [0.3, 1.2, -0.5].iter().map(|&p| C64::from_polar(1.0, p)).collect();
    let u = h.spectrum().with_weights(&diag);
    assert!(u.commutator(h.matrix()).max_abs() < 1e-15);
    assert!((&(&u.adjoint() * &u) - &ComplexMatrix::identity(3)).max_abs() < 1e-15);
}
