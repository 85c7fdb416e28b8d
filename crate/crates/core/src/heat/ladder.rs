// SPDX-License-Identifier: Apache-2.0

//! Closed forms for `N` non-interacting `d`-level ladders `H = Σ_k Σ_n n|n⟩⟨n|`.
//!
//! On a product of ladders the Gibbs family factorises, so the objective and
//! the root condition reduce to Bose-like sums. The constraint returned here
//! equals `−β f(β̃, E − S/β)` on the explicit ladder Hamiltonian.

use serde::Serialize;

use super::{find_beta_roots, ScalarProblem};
use crate::error::{Error, Result};
use crate::state::Hamiltonian;
use crate::thermo::check_beta;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LadderPoint {
    /// `E_S − E(γ(β̃))`.
    pub objective: f64,
    /// Vanishes exactly at the roots `β_c`, `β_h`.
    pub constraint: f64,
}

/// Below this `|dβ̃|` the Bose difference uses its Taylor series.
const SERIES_CUTOFF: f64 = 1e-3;

/// `d/(e^{dx} − 1) − 1/(e^x − 1)`, finite at `x = 0` where it equals `−(d−1)/2`.
fn bose_difference(x: f64, d: f64) -> f64 {
    if (d * x).abs() < SERIES_CUTOFF {
        return -(d - 1.0) / 2.0 + (d * d - 1.0) * x / 12.0 - (d.powi(4) - 1.0) * x.powi(3) / 720.0;
    }
    d / (d * x).exp_m1() - 1.0 / x.exp_m1()
}

/// `ln|e^z − 1|` without overflow or cancellation.
fn ln_abs_expm1(z: f64) -> f64 {
    if z > 0.0 {
        z + (-(-z).exp_m1()).ln()
    } else {
        (-z.exp_m1()).ln()
    }
}

/// `ln[(e^x − 1)/(e^{dx} − 1)]`, equal to `−ln d` at `x = 0`.
fn log_ratio(x: f64, d: f64) -> f64 {
    if x == 0.0 {
        -d.ln()
    } else {
        ln_abs_expm1(x) - ln_abs_expm1(d * x)
    }
}

/// Objective and constraint at `β̃` for `parties` ladders of dimension `d`.
pub fn ho_constraint_objective(
    beta_tilde: f64,
    problem: &ScalarProblem,
    parties: usize,
    d: usize,
) -> Result<LadderPoint> {
    if parties == 0 || d < 2 {
        return Err(Error::Domain(format!("need parties ≥ 1 and d ≥ 2, got {parties}, {d}")));
    }
    if problem.hamiltonian.dims() != vec![d; parties].as_slice() {
        return Err(Error::Dimension(format!(
            "Hamiltonian dims {:?} are not {parties} ladders of dimension {d}",
            problem.hamiltonian.dims()
        )));
    }
    if !beta_tilde.is_finite() {
        return Err(Error::Domain(format!("β̃ must be finite, got {beta_tilde}")));
    }
    let (n, df) = (parties as f64, d as f64);
    let e_s = problem.energy;
    let objective = n * bose_difference(beta_tilde, df) + e_s;
    let constraint = (beta_tilde - problem.beta) * objective - beta_tilde * e_s
        + n * (df - 1.0) * beta_tilde
        + n * log_ratio(beta_tilde, df)
        + problem.entropy;
    Ok(LadderPoint { objective, constraint })
}

/// `β_c ≈ 6 ln d / (β(d² − 1))` for two ladders with maximally mixed marginals,
/// valid at large `β`.
pub fn beta_c_asymptotic(d: usize, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if d < 2 {
        return Err(Error::Domain(format!("d must be at least 2, got {d}")));
    }
    let df = d as f64;
    Ok(6.0 * df.ln() / (beta * (df * df - 1.0)))
}

/// Two ladders of dimension `d`.
pub fn two_ladder_hamiltonian(d: usize) -> Result<Hamiltonian> {
    let local = Hamiltonian::ladder(d)?;
    Hamiltonian::local_sum(&[local.clone(), local])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AsymptoticRow {
    pub d: usize,
    pub beta: f64,
    /// `|β_c|` from the root solver.
    pub numeric: f64,
    pub asymptotic: f64,
    pub rel_err: f64,
}

/// Compares the solved `|β_c|` with [`beta_c_asymptotic`] for a bipartite
/// state with maximally mixed marginals (`E = d − 1`) and entropy `entropy`
/// (defaults to `ln d`, a maximally entangled state mixed down to the
/// marginal entropy).
pub fn asymptotic_row(d: usize, beta: f64, entropy: Option<f64>) -> Result<AsymptoticRow> {
    let h = two_ladder_hamiltonian(d)?;
    let s = entropy.unwrap_or((d as f64).ln());
    let problem = ScalarProblem::new(&h, (d - 1) as f64, s, beta)?;
    let roots = find_beta_roots(&problem)?;
    let numeric = roots.beta_c.abs();
    let asymptotic = beta_c_asymptotic(d, beta)?;
    Ok(AsymptoticRow { d, beta, numeric, asymptotic, rel_err: (numeric - asymptotic).abs() / asymptotic })
}
