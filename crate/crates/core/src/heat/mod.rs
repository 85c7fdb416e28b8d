// SPDX-License-Identifier: Apache-2.0

//! Optimal heat a system can exchange with a thermal environment when a
//! memory is allowed to assist but must end in its initial state.
//!
//! For a state with energy `E` and entropy `S` the extremal heats are reached
//! by Gibbs states `γ(x) = e^{−xH}/Z(x)` on the free-energy level set
//! `F_β(γ(x)) = y`, `y = E − S/β`. Along the family, `F_β(γ(x))` has its
//! minimum at `x = β`, decreases on `x < β` and increases on `x > β`, so the
//! level set has at most two points `β_c ≤ β ≤ β_h`:
//!
//! * `Q_c = β⁻¹[S − S(γ(β_c))]` (environment cooled, `Q_c ≤ 0`);
//! * `Q_h = β⁻¹[S − S(γ(β_h))]` (environment heated, `Q_h ≥ 0`).
//!
//! When `y` is at or beyond an end of the family, the root does not exist
//! and the heat is the energy gap to that end: `Q_h = E − ε_1` (the cap; the
//! system can be cooled to its ground space) and `Q_c = E − ε_d` with `β_c`
//! reported as `−∞`.

pub mod ladder;
pub mod oracle;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::{DensityMatrix, Hamiltonian};
use crate::thermo::{average_energy, check_beta, von_neumann_entropy, GibbsFamily};

/// Relative interval width at which root bisection stops.
pub const ROOT_REL_TOL: f64 = 1e-12;
/// Distance to an end-of-family free energy below which that root is missing.
pub const LIMIT_TOL: f64 = 1e-12;
/// Slack on `y ≥ F_β(γ(β))` before the problem is declared infeasible.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// `|x|` cutoff times the smallest end-level gap; beyond it `γ(x)` is numerically its limit.
pub const X_SPAN: f64 = 1e4;

const SCALAR_TOL: f64 = 1e-9;

/// A heat problem reduced to the two numbers it depends on.
#[derive(Clone, Copy, Debug)]
pub struct ScalarProblem<'a> {
    pub hamiltonian: &'a Hamiltonian,
    pub energy: f64,
    pub entropy: f64,
    pub beta: f64,
}

impl<'a> ScalarProblem<'a> {
    pub fn new(hamiltonian: &'a Hamiltonian, energy: f64, entropy: f64, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        let max_entropy = (hamiltonian.dim() as f64).ln();
        if !(entropy >= -SCALAR_TOL && entropy <= max_entropy + SCALAR_TOL) {
            return Err(Error::Domain(format!("entropy {entropy} outside [0, ln {}]", hamiltonian.dim())));
        }
        let (lo, hi) = (hamiltonian.ground_energy(), hamiltonian.top_energy());
        let slack = SCALAR_TOL * lo.abs().max(hi.abs()).max(1.0);
        if !(energy >= lo - slack && energy <= hi + slack) {
            return Err(Error::Domain(format!("energy {energy} outside the spectrum [{lo}, {hi}]")));
        }
        Ok(Self { hamiltonian, energy, entropy: entropy.max(0.0), beta })
    }

    pub fn from_state(rho: &DensityMatrix, hamiltonian: &'a Hamiltonian, beta: f64) -> Result<Self> {
        let energy = average_energy(rho, hamiltonian)?;
        Self::new(hamiltonian, energy, von_neumann_entropy(rho), beta)
    }

    /// `y = E − S/β`.
    pub fn free_energy(&self) -> f64 {
        self.energy - self.entropy / self.beta
    }

    pub fn family(&self) -> GibbsFamily<'a> {
        GibbsFamily::of(self.hamiltonian)
    }

    /// Search cutoff for `|x|`.
    pub fn x_limit(&self) -> f64 {
        x_cutoff(&self.family(), self.beta)
    }

    /// `E − E(γ(x))`, the heat released when the system ends in `γ(x)`.
    pub fn objective(&self, x: f64) -> f64 {
        self.energy - self.family().energy(x)
    }
}

/// `X_SPAN` over the smallest gap between an extreme eigenspace and its
/// neighbouring level, plus `|β|`. Past it `γ(x)` equals its limit state to
/// machine precision even when the extreme levels are nearly degenerate.
fn x_cutoff(family: &GibbsFamily, beta: f64) -> f64 {
    let levels = family.levels();
    let d = levels.len();
    let (m1, md) = (family.ground_multiplicity(), family.top_multiplicity());
    let range = levels[d - 1] - levels[0];
    let mut gap = range;
    if m1 < d {
        gap = gap.min(levels[m1] - levels[0]);
    }
    if md < d {
        gap = gap.min(levels[d - 1] - levels[d - 1 - md]);
    }
    X_SPAN / gap + beta.abs()
}

/// `f(x, y) = y − F_β(γ(x))`.
pub fn f_function(x: f64, y: f64, h: &Hamiltonian, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if !x.is_finite() {
        return Err(Error::Domain(format!("x must be finite, got {x}")));
    }
    Ok(y - GibbsFamily::of(h).free_energy(x, beta))
}

/// Zeros of `f(·, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BetaRoots {
    /// Left root, or `f64::NEG_INFINITY` when `y` reaches the top-level limit.
    pub beta_c: f64,
    /// Right root, or `None` when `y` reaches the ground-level limit.
    pub beta_h: Option<f64>,
    /// `y` equals the Gibbs free energy, so `β_c = β_h = β`.
    pub degenerate: bool,
}

/// Bisection on a bracket with `g(inside) ≤ 0 < g(outside)`.
fn bisect<G: Fn(f64) -> f64>(g: G, mut inside: f64, mut outside: f64) -> f64 {
    loop {
        let mid = 0.5 * (inside + outside);
        if (outside - inside).abs() <= ROOT_REL_TOL * mid.abs().max(1.0) || mid == inside || mid == outside {
            return mid;
        }
        if g(mid) > 0.0 {
            outside = mid;
        } else {
            inside = mid;
        }
    }
}

/// Walks away from `β` in direction `dir` with doubling steps until
/// `g > 0`, then bisects. `None` when the cutoff is reached first.
fn branch_root<G: Fn(f64) -> f64>(g: G, beta: f64, dir: f64, first_step: f64, limit: f64) -> Option<f64> {
    let mut inside = beta;
    let mut step = first_step;
    loop {
        let x = beta + dir * step;
        if x.abs() > limit {
            let edge = dir * limit;
            return if g(edge) > 0.0 { Some(bisect(&g, inside, edge)) } else { None };
        }
        if g(x) > 0.0 {
            return Some(bisect(&g, inside, x));
        }
        inside = x;
        step *= 2.0;
    }
}

pub fn find_beta_roots(problem: &ScalarProblem) -> Result<BetaRoots> {
    level_set_roots(problem.hamiltonian, problem.free_energy(), problem.beta)
}

/// Zeros of `f(·, y)` for a free-energy level `y` alone.
pub fn level_set_roots(h: &Hamiltonian, y: f64, beta: f64) -> Result<BetaRoots> {
    check_beta(beta)?;
    if !y.is_finite() {
        return Err(Error::Domain(format!("free energy must be finite, got {y}")));
    }
    let family = GibbsFamily::of(h);
    let gibbs = family.free_energy(beta, beta);
    if y < gibbs - FEASIBILITY_TOL {
        return Err(Error::Infeasible { y, gibbs });
    }
    let degenerate = BetaRoots { beta_c: beta, beta_h: Some(beta), degenerate: true };
    let range = h.spectral_range();
    if range <= 1e-14 * h.top_energy().abs().max(1.0) {
        // H ∝ 1: every state has the same energy.
        return Ok(degenerate);
    }
    if y - gibbs <= 1e-13 * y.abs().max(1.0) {
        return Ok(degenerate);
    }

    let g = |x: f64| family.free_energy(x, beta) - y;
    let limit = x_cutoff(&family, beta);
    let first_step = 1.0 / range;

    let beta_h = if y >= family.ground_limit().free_energy(beta) - LIMIT_TOL {
        None
    } else {
        branch_root(g, beta, 1.0, first_step, limit)
    };
    let beta_c = if y >= family.top_limit().free_energy(beta) - LIMIT_TOL {
        f64::NEG_INFINITY
    } else {
        branch_root(g, beta, -1.0, first_step, limit).unwrap_or(f64::NEG_INFINITY)
    };
    Ok(BetaRoots { beta_c, beta_h, degenerate: false })
}

/// Extremal heats of one state (or of the scalar data of a set of states).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HeatBounds {
    /// `−∞` when the left root is missing.
    pub beta_c: f64,
    pub beta_h: Option<f64>,
    pub q_c: f64,
    pub q_h: f64,
    /// `q_h` took the `E − ε_1` branch because the right root is missing.
    pub h_capped: bool,
    pub degenerate: bool,
}

impl HeatBounds {
    /// `[q_c, q_h]` contains `q` within `margin`.
    pub fn contains(&self, q: f64, margin: f64) -> bool {
        q >= self.q_c - margin && q <= self.q_h + margin
    }
}

/// Heat bounds from scalar data; shared by single states and witness sets.
pub fn heat_bounds_scalar(problem: &ScalarProblem) -> Result<HeatBounds> {
    let roots = find_beta_roots(problem)?;
    if roots.degenerate {
        return Ok(HeatBounds {
            beta_c: roots.beta_c,
            beta_h: roots.beta_h,
            q_c: 0.0,
            q_h: 0.0,
            h_capped: false,
            degenerate: true,
        });
    }
    let family = problem.family();
    let beta = problem.beta;
    let heat_at = |x: f64| (problem.entropy - family.entropy(x)) / beta;
    let q_c = if roots.beta_c.is_finite() { heat_at(roots.beta_c) } else { problem.energy - family.top_limit().energy };
    let (q_h, h_capped) = match roots.beta_h {
        Some(x) => (heat_at(x), false),
        None => (problem.energy - family.ground_limit().energy, true),
    };
    Ok(HeatBounds { beta_c: roots.beta_c, beta_h: roots.beta_h, q_c, q_h, h_capped, degenerate: false })
}

/// Minimal and maximal heat `ρ` can release into a bath at inverse temperature `beta`.
pub fn heat_bounds(rho: &DensityMatrix, h: &Hamiltonian, beta: f64) -> Result<HeatBounds> {
    let problem = ScalarProblem::from_state(rho, h, beta)?;
    heat_bounds_scalar(&problem)
}

/// `|tr[H(ρ − γ(x))] − β⁻¹[S(ρ) − S(γ(x))]|`; zero exactly on the level set.
pub fn root_consistency_defect(problem: &ScalarProblem, x: f64) -> f64 {
    let pt = problem.family().point(x);
    let by_energy = problem.energy - pt.energy;
    let by_entropy = (problem.entropy - pt.entropy) / problem.beta;
    (by_energy - by_entropy).abs()
}
