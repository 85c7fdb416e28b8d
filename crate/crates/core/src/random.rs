// SPDX-License-Identifier: Apache-2.0

//! Seeded samplers for test states and unitaries.
//!
//! Every sampler has an `rng`-taking form for composing draws and a seeded
//! convenience form. `ChaCha8Rng` makes the output identical across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_spectrum, ComplexMatrix, C64};
use crate::state::{DensityMatrix, Hamiltonian};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::Dimension(format!("invalid dimensions {dims:?}")));
    }
    Ok(dims.iter().product())
}

/// Ginibre-ensemble mixed state `G G† / tr(G G†)`.
pub fn random_state_with<R: Rng + ?Sized>(rng: &mut R, dims: &[usize]) -> Result<DensityMatrix> {
    let d = check_dims(dims)?;
    let entries: Vec<C64> = (0..d * d).map(|_| complex_normal(rng)).collect();
    let g = ComplexMatrix::from_row_major(d, &entries)?;
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    DensityMatrix::new(gg.scale(1.0 / tr).hermitian_part(), dims.to_vec())
}

pub fn random_density_matrix(dim: usize, seed: u64) -> Result<DensityMatrix> {
    random_state_with(&mut rng_from_seed(seed), &[dim])
}

/// Haar-random pure state vector.
pub fn random_pure_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..dim).map(|_| complex_normal(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn random_pure_state_with<R: Rng + ?Sized>(rng: &mut R, dims: &[usize]) -> Result<DensityMatrix> {
    let d = check_dims(dims)?;
    DensityMatrix::from_pure(&random_pure_vector(rng, d), dims.to_vec())
}

/// Flat Dirichlet weights (normalised exponential draws).
pub fn dirichlet_weights<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Mixture of `k` product states with Dirichlet weights; separable by
/// construction. Local factors are Ginibre states.
pub fn random_separable_state_with<R: Rng + ?Sized>(rng: &mut R, dims: &[usize], k: usize) -> Result<DensityMatrix> {
    check_dims(dims)?;
    if k == 0 {
        return Err(Error::Domain("mixture needs at least one product term".into()));
    }
    let weights = dirichlet_weights(rng, k);
    let mut terms = Vec::with_capacity(k);
    for w in weights {
        let mut prod = random_state_with(rng, &dims[..1])?;
        for &d in &dims[1..] {
            prod = prod.tensor(&random_state_with(rng, &[d])?);
        }
        terms.push((w, prod));
    }
    // Dirichlet weights may miss unit sum by an ulp; renormalise the first.
    let total: f64 = terms.iter().map(|t| t.0).sum();
    terms[0].0 += 1.0 - total;
    DensityMatrix::mixture(&terms)
}

pub fn random_separable_state(dims: &[usize], k: usize, seed: u64) -> Result<DensityMatrix> {
    random_separable_state_with(&mut rng_from_seed(seed), dims, k)
}

/// Diagonal in the eigenbasis of `h` with Dirichlet populations.
pub fn random_incoherent_state_with<R: Rng + ?Sized>(rng: &mut R, h: &Hamiltonian) -> Result<DensityMatrix> {
    let w: Vec<C64> = dirichlet_weights(rng, h.dim()).into_iter().map(|p| C64::new(p, 0.0)).collect();
    let m = h.spectrum().with_weights(&w).hermitian_part();
    DensityMatrix::new(m, h.dims().to_vec())
}

/// Random Hermitian matrix with Gaussian entries (GUE up to scale).
pub fn random_hermitian_with<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let entries: Vec<C64> = (0..dim * dim).map(|_| complex_normal(rng)).collect();
    ComplexMatrix::from_row_major(dim, &entries).expect("square").hermitian_part()
}

/// Eigenvectors of a random Hermitian matrix.
pub fn random_unitary_with<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    hermitian_spectrum(&random_hermitian_with(rng, dim)).expect("Hermitian by construction").eigenvectors
}

/// Sorted energies with ground level 0 and the rest uniform in `(0, scale)`.
pub fn random_levels_with<R: Rng + ?Sized>(rng: &mut R, dim: usize, scale: f64) -> Vec<f64> {
    let mut levels: Vec<f64> = std::iter::once(0.0).chain((1..dim).map(|_| scale * rng.random::<f64>())).collect();
    levels.sort_by(f64::total_cmp);
    levels
}
