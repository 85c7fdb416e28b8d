// SPDX-License-Identifier: Apache-2.0

//! Shared inputs for the criterion benchmarks.

use thermowit_core::random::{random_density_matrix, random_levels_with, rng_from_seed};
use thermowit_core::{DensityMatrix, Hamiltonian};

/// Seeded state and diagonal Hamiltonian of dimension `dim`.
pub fn heat_fixture(dim: usize, seed: u64) -> (DensityMatrix, Hamiltonian) {
    let rho = random_density_matrix(dim, seed).expect("valid dimension");
    let levels = random_levels_with(&mut rng_from_seed(seed ^ 0x9e37), dim, 1.0);
    (rho, Hamiltonian::from_levels(&levels).expect("valid levels"))
}
