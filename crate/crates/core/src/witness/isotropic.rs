// SPDX-License-Identifier: Apache-2.0

//! Two-qudit isotropic states `(1−λ)|ψ⁺⟩⟨ψ⁺| + λ 𝟙/d²` and their detection
//! threshold.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use super::{detect, sep_free_energy_bound, witness_heat_bounds, LocalData, DEFAULT_MARGIN};
use crate::error::{Error, Result};
use crate::heat::heat_bounds;
use crate::linalg::{ComplexMatrix, C64};
use crate::state::{DensityMatrix, Hamiltonian};

fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::Domain(format!("local dimension must be at least 2, got {d}")));
    }
    Ok(())
}

pub fn isotropic_state(d: usize, lambda: f64) -> Result<DensityMatrix> {
    check_d(d)?;
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Domain(format!("λ must lie in [0, 1], got {lambda}")));
    }
    let n = d * d;
    // |ψ⁺⟩⟨ψ⁺| has entries 1/d on the (ii, jj) block; built directly so the
    // energies of the family come out exact.
    let bell = (1.0 - lambda) / d as f64;
    let noise = lambda / n as f64;
    let m = DMatrix::from_fn(n, n, |r, c| {
        let paired = r % (d + 1) == 0 && c % (d + 1) == 0;
        let v = if paired { bell } else { 0.0 } + if r == c { noise } else { 0.0 };
        C64::new(v, 0.0)
    });
    DensityMatrix::new(ComplexMatrix::from_matrix(m)?, vec![d, d])
}

/// The two-qubit member of the family.
pub fn werner_state(lambda: f64) -> Result<DensityMatrix> {
    isotropic_state(2, lambda)
}

/// `S(ρ_AB(λ))` from the closed-form spectrum
/// `{1 − λ + λ/d² (×1), λ/d² (×(d²−1))}`.
pub fn isotropic_entropy(d: usize, lambda: f64) -> f64 {
    let n = (d * d) as f64;
    let xlogx = |p: f64| if p > 0.0 { -p * p.ln() } else { 0.0 };
    xlogx(1.0 - lambda + lambda / n) + (n - 1.0) * xlogx(lambda / n)
}

/// `(λ − d²λ) ln(λ/d²) + [d²(λ−1) − λ] ln[(1/d² − 1)λ + 1] − d² ln d`.
///
/// The left side equals `d² S(ρ_AB(λ))`, so the zero is where the conditional
/// entropy `S(AB) − log d` changes sign.
pub fn lambda_crt_residual(d: usize, lambda: f64) -> f64 {
    let n = (d * d) as f64;
    let first = if lambda > 0.0 { (lambda - n * lambda) * (lambda / n).ln() } else { 0.0 };
    let second = (n * (lambda - 1.0) - lambda) * ((1.0 / n - 1.0) * lambda + 1.0).ln();
    first + second - n * (d as f64).ln()
}

const UNIQUENESS_SCAN: usize = 1000;

/// Threshold `λ` below which the isotropic state has negative conditional entropy.
pub fn lambda_crt(d: usize) -> Result<f64> {
    check_d(d)?;
    let r = |l: f64| lambda_crt_residual(d, l);
    let changes = (0..UNIQUENESS_SCAN)
        .filter(|&k| {
            let a = k as f64 / UNIQUENESS_SCAN as f64;
            let b = (k + 1) as f64 / UNIQUENESS_SCAN as f64;
            (r(a) < 0.0) != (r(b) < 0.0)
        })
        .count();
    if changes != 1 {
        return Err(Error::Numerical(format!("expected one sign change of the threshold equation, found {changes}")));
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if r(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// One grid point of the detection sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub q_c: f64,
    pub q_h: f64,
    pub q_star_c: f64,
    pub q_star_h: f64,
    pub detected: bool,
}

/// Heat bounds of isotropic states on two `d`-level ladders against the
/// separable envelope from their exact marginals (`E = (d−1)/2`, `S = ln d`).
/// Rows are in grid order `λ_k = k/(steps−1)`.
pub fn isotropic_sweep(d: usize, beta: f64, steps: usize) -> Result<Vec<SweepRow>> {
    check_d(d)?;
    if steps < 2 {
        return Err(Error::Validation(format!("λ grid needs at least 2 points, got {steps}")));
    }
    let local = Hamiltonian::ladder(d)?;
    let h = Hamiltonian::local_sum(&[local.clone(), local])?;
    let marginal = LocalData { energy: (d - 1) as f64 / 2.0, entropy: (d as f64).ln() };
    let env = witness_heat_bounds(&sep_free_energy_bound(&[marginal, marginal], beta)?, &h, beta)?;
    (0..steps)
        .into_par_iter()
        .map(|k| {
            let lambda = k as f64 / (steps - 1) as f64;
            let rho = isotropic_state(d, lambda)?;
            let b = heat_bounds(&rho, &h, beta)?;
            Ok(SweepRow {
                lambda,
                q_c: b.q_c,
                q_h: b.q_h,
                q_star_c: env.q_star_c,
                q_star_h: env.q_star_h,
                detected: detect(&b, &env, DEFAULT_MARGIN).is_detected(),
            })
        })
        .collect()
}
