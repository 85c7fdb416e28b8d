// SPDX-License-Identifier: Apache-2.0

//! Heat envelopes for sets of states.
//!
//! Any state in a set `𝒮` with free energy at most `F*` exchanges heat
//! within `[Q*_c, Q*_h]`, the heat bounds of the scalar problem
//! `(E = e_cap, S = s_floor)` whose level is `F* = e_cap − s_floor/β`. A
//! measured heat outside the envelope certifies the state is not in `𝒮`.

pub mod isotropic;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::heat::{level_set_roots, HeatBounds};
use crate::state::{partial_trace, DensityMatrix, Hamiltonian};
use crate::thermo::{average_energy, binary_entropy, check_beta, von_neumann_entropy, GibbsFamily};

/// Default guard against rounding when comparing a heat with an envelope.
pub const DEFAULT_MARGIN: f64 = 1e-7;

const DATA_TOL: f64 = 1e-9;

/// Energy and entropy of one subsystem.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LocalData {
    pub energy: f64,
    pub entropy: f64,
}

/// Marginal data of `rho` for each party, with local Hamiltonians in party order.
pub fn local_data(rho: &DensityMatrix, locals: &[Hamiltonian]) -> Result<Vec<LocalData>> {
    if locals.len() != rho.dims().len() {
        return Err(Error::Dimension(format!("{} local Hamiltonians for {} parties", locals.len(), rho.dims().len())));
    }
    locals
        .iter()
        .enumerate()
        .map(|(k, h)| {
            let marginal = partial_trace(rho, &[k])?;
            Ok(LocalData { energy: average_energy(&marginal, h)?, entropy: von_neumann_entropy(&marginal) })
        })
        .collect()
}

/// Free-energy level of a set and the scalar data generating its envelope.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FreeEnergyBound {
    pub f_star: f64,
    /// Lower bound on the entropy of every member.
    pub s_floor: f64,
    /// Energy shared by (or maximal over) the members.
    pub e_cap: f64,
}

/// Separable states with given marginals: `S(ρ) ≥ max_k S_k`, so
/// `F ≤ Σ_k E_k − max_k S_k/β`.
pub fn sep_free_energy_bound(locals: &[LocalData], beta: f64) -> Result<FreeEnergyBound> {
    check_beta(beta)?;
    if locals.len() < 2 {
        return Err(Error::Validation(format!("separable bound needs at least 2 subsystems, got {}", locals.len())));
    }
    for l in locals {
        if !l.energy.is_finite() || !l.entropy.is_finite() || l.entropy < -DATA_TOL {
            return Err(Error::Validation(format!("invalid local data {l:?}")));
        }
    }
    let e_cap: f64 = locals.iter().map(|l| l.energy).sum();
    let s_floor = locals.iter().map(|l| l.entropy.max(0.0)).fold(0.0, f64::max);
    Ok(FreeEnergyBound { f_star: e_cap - s_floor / beta, s_floor, e_cap })
}

/// Separable bound when only local energies are known: entropy floor 0.
pub fn sep_free_energy_bound_energy_only(energies: &[f64], beta: f64) -> Result<FreeEnergyBound> {
    let locals: Vec<LocalData> = energies.iter().map(|&energy| LocalData { energy, entropy: 0.0 }).collect();
    sep_free_energy_bound(&locals, beta)
}

/// Least entropy of a state diagonal in the eigenbasis with energy `energy`.
///
/// Entropy is concave on the simplex, so the minimum over the slice of fixed
/// energy sits at a vertex: a mixture of two levels bracketing `energy`.
pub fn min_incoherent_entropy(levels: &[f64], energy: f64) -> Result<f64> {
    let (lo, hi) = (levels[0], levels[levels.len() - 1]);
    let slack = DATA_TOL * lo.abs().max(hi.abs()).max(1.0);
    if !(energy >= lo - slack && energy <= hi + slack) {
        return Err(Error::Domain(format!("energy {energy} outside the spectrum [{lo}, {hi}]")));
    }
    let e = energy.clamp(lo, hi);
    let mut best = f64::INFINITY;
    for (i, &a) in levels.iter().enumerate() {
        if (a - e).abs() <= slack {
            return Ok(0.0);
        }
        for &b in &levels[i + 1..] {
            if a < e && e < b {
                best = best.min(binary_entropy((e - a) / (b - a))?);
            }
        }
    }
    Ok(best)
}

/// Entropy of the ground/top mixture `(1−p)|ε_1⟩⟨ε_1| + p|ε_d⟩⟨ε_d|` at energy `energy`.
///
/// The least incoherent entropy for two levels; above two levels it can
/// exceed [`min_incoherent_entropy`] and is then not a valid floor.
pub fn ground_top_entropy(levels: &[f64], energy: f64) -> Result<f64> {
    let (lo, hi) = (levels[0], levels[levels.len() - 1]);
    if hi <= lo {
        return Ok(0.0);
    }
    let p = (energy - lo) / (hi - lo);
    if !(-DATA_TOL..=1.0 + DATA_TOL).contains(&p) {
        return Err(Error::Domain(format!("energy {energy} outside the spectrum [{lo}, {hi}]")));
    }
    binary_entropy(p.clamp(0.0, 1.0))
}

/// Incoherent states of energy `energy_s`.
pub fn incoh_free_energy_bound(energy_s: f64, h: &Hamiltonian, beta: f64) -> Result<FreeEnergyBound> {
    check_beta(beta)?;
    let s_floor = min_incoherent_entropy(h.levels(), energy_s)?;
    Ok(FreeEnergyBound { f_star: energy_s - s_floor / beta, s_floor, e_cap: energy_s })
}

/// Heat envelope `[q_star_c, q_star_h]` of a set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WitnessEnvelope {
    pub f_star: f64,
    pub s_floor: f64,
    pub e_cap: f64,
    pub q_star_c: f64,
    pub q_star_h: f64,
    /// `−∞` when the left root is missing.
    pub beta_star_c: f64,
    pub beta_star_h: Option<f64>,
}

/// Envelope of a set with free-energy bound `bound` on Hamiltonian `h`.
pub fn witness_heat_bounds(bound: &FreeEnergyBound, h: &Hamiltonian, beta: f64) -> Result<WitnessEnvelope> {
    let roots = level_set_roots(h, bound.f_star, beta)?;
    let family = GibbsFamily::of(h);
    let heat_at = |x: f64| (bound.s_floor - family.entropy(x)) / beta;
    let (q_star_c, q_star_h) = if roots.degenerate {
        (0.0, 0.0)
    } else {
        let c = if roots.beta_c.is_finite() { heat_at(roots.beta_c) } else { bound.e_cap - family.top_limit().energy };
        let h = match roots.beta_h {
            Some(x) => heat_at(x),
            None => bound.e_cap - family.ground_limit().energy,
        };
        (c, h)
    };
    let tol = DATA_TOL * bound.e_cap.abs().max(1.0);
    if q_star_c > tol || q_star_h < -tol {
        return Err(Error::Validation(format!(
            "envelope [{q_star_c}, {q_star_h}] excludes 0; bound data {bound:?} describes no state"
        )));
    }
    Ok(WitnessEnvelope {
        f_star: bound.f_star,
        s_floor: bound.s_floor,
        e_cap: bound.e_cap,
        q_star_c,
        q_star_h,
        beta_star_c: roots.beta_c,
        beta_star_h: roots.beta_h,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Inside,
    DetectedLow,
    DetectedHigh,
}

impl Verdict {
    pub fn is_detected(self) -> bool {
        self != Verdict::Inside
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Inside => "inside",
            Verdict::DetectedLow => "detected-low",
            Verdict::DetectedHigh => "detected-high",
        }
    }
}

/// Classifies a measured heat against an envelope; the boundary counts as inside.
pub fn verdict(q: f64, envelope: &WitnessEnvelope, margin: f64) -> Verdict {
    if q < envelope.q_star_c - margin {
        Verdict::DetectedLow
    } else if q > envelope.q_star_h + margin {
        Verdict::DetectedHigh
    } else {
        Verdict::Inside
    }
}

/// Whether either extremal heat of a state escapes the envelope.
pub fn detect(bounds: &HeatBounds, envelope: &WitnessEnvelope, margin: f64) -> Verdict {
    match verdict(bounds.q_c, envelope, margin) {
        Verdict::DetectedLow => Verdict::DetectedLow,
        _ => verdict(bounds.q_h, envelope, margin),
    }
}
