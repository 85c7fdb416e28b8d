// SPDX-License-Identifier: Apache-2.0

//! Brute-force reference for the heat bounds.
//!
//! Tier (a) scans the Gibbs family on a dense grid (log-spaced around `β`
//! plus uniform over the search window, with both `±∞` limits as candidates)
//! and zooms around the best feasible point. Tier (b) draws random states,
//! keeps those satisfying `F_β(η) ≤ F_β(ρ)` and records how far their heat
//! strays outside the tier-(a) interval.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{find_beta_roots, heat_bounds_scalar, root_consistency_defect, ScalarProblem};
use crate::error::{Error, Result};
use crate::random::{
    random_incoherent_state_with, random_levels_with, random_pure_state_with, random_state_with, rng_from_seed,
};
use crate::state::{DensityMatrix, Hamiltonian};
use crate::thermo::{average_energy, free_energy, gibbs_limit_state, gibbs_state, GibbsFamily, GibbsLimit};

#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    /// Grid points per scan and per zoom level (at least 1000).
    pub resolution: usize,
    pub zoom_levels: usize,
    /// Random states drawn in tier (b); 0 skips it.
    pub samples: usize,
    pub seed: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self { resolution: 2000, zoom_levels: 4, samples: 2000, seed: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OracleBounds {
    pub q_c: f64,
    pub q_h: f64,
    /// Gibbs parameter attaining `q_c`; `−∞` for the top-level limit.
    pub x_c: f64,
    /// Gibbs parameter attaining `q_h`; `+∞` for the ground-level limit.
    pub x_h: f64,
    pub feasible_samples: usize,
    /// Largest distance of a feasible sample's heat outside `[q_c, q_h]`.
    pub max_excess: f64,
}

/// Feasibility slack for grid points; grid points never define the exact level set.
const GRID_SLACK: f64 = 1e-12;

struct Scan<'a> {
    family: GibbsFamily<'a>,
    energy: f64,
    y: f64,
    beta: f64,
}

impl Scan<'_> {
    fn feasible(&self, x: f64) -> bool {
        self.family.free_energy(x, self.beta) <= self.y + GRID_SLACK * self.y.abs().max(1.0)
    }

    fn heat(&self, x: f64) -> f64 {
        self.energy - self.family.energy(x)
    }

    /// Best feasible point of `grid` under `better`, refined by repeated zooms.
    fn extremum(
        &self,
        grid: &[f64],
        resolution: usize,
        levels: usize,
        better: impl Fn(f64, f64) -> bool,
    ) -> Option<f64> {
        let mut grid = grid.to_vec();
        let mut best: Option<f64> = None;
        for _ in 0..=levels {
            let mut idx = None;
            for (i, &x) in grid.iter().enumerate() {
                if self.feasible(x) && best.is_none_or(|b| better(self.heat(x), self.heat(b))) {
                    best = Some(x);
                    idx = Some(i);
                }
            }
            let Some(i) = idx else { break };
            let lo = grid[i.saturating_sub(1)];
            let hi = grid[(i + 1).min(grid.len() - 1)];
            if hi <= lo {
                break;
            }
            grid = (0..=resolution).map(|k| lo + (hi - lo) * k as f64 / resolution as f64).collect();
        }
        best
    }
}

fn base_grid(problem: &ScalarProblem, resolution: usize) -> Vec<f64> {
    let beta = problem.beta;
    let limit = problem.x_limit();
    let scale = 1.0 / problem.hamiltonian.spectral_range();
    let mut grid = Vec::with_capacity(4 * resolution + 3);
    let (lo_exp, hi_exp) = ((1e-9 * scale).log10(), (2.0 * limit).log10());
    for k in 0..resolution {
        let off = 10f64.powf(lo_exp + (hi_exp - lo_exp) * k as f64 / (resolution - 1) as f64);
        grid.push(beta + off);
        grid.push(beta - off);
    }
    for k in 0..=resolution {
        grid.push(-limit + 2.0 * limit * k as f64 / resolution as f64);
    }
    grid.push(beta);
    grid.retain(|x| x.abs() <= limit);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Tier (a) only: extremal heat over the Gibbs family and its limits.
pub fn gibbs_scan(problem: &ScalarProblem, resolution: usize, zoom_levels: usize) -> Result<(f64, f64, f64, f64)> {
    if resolution < 1000 {
        return Err(Error::Validation(format!("oracle resolution {resolution} below 1000")));
    }
    let family = problem.family();
    let scan = Scan { family, energy: problem.energy, y: problem.free_energy(), beta: problem.beta };
    let tol = GRID_SLACK * scan.y.abs().max(1.0);
    let grid = base_grid(problem, resolution);

    let (x_c, q_c) = if family.top_limit().free_energy(problem.beta) <= scan.y + tol {
        (f64::NEG_INFINITY, problem.energy - family.top_limit().energy)
    } else {
        let x = scan
            .extremum(&grid, resolution, zoom_levels, |a, b| a < b)
            .ok_or_else(|| Error::Numerical("no feasible Gibbs point on the grid".into()))?;
        (x, scan.heat(x))
    };
    let (x_h, q_h) = if family.ground_limit().free_energy(problem.beta) <= scan.y + tol {
        (f64::INFINITY, problem.energy - family.ground_limit().energy)
    } else {
        let x = scan
            .extremum(&grid, resolution, zoom_levels, |a, b| a > b)
            .ok_or_else(|| Error::Numerical("no feasible Gibbs point on the grid".into()))?;
        (x, scan.heat(x))
    };
    Ok((x_c, q_c, x_h, q_h))
}

fn state_at(h: &Hamiltonian, x: f64) -> Result<DensityMatrix> {
    if x == f64::INFINITY {
        Ok(gibbs_limit_state(h, GibbsLimit::Ground))
    } else if x == f64::NEG_INFINITY {
        Ok(gibbs_limit_state(h, GibbsLimit::Top))
    } else {
        gibbs_state(h, x)
    }
}

/// Both tiers for the state `rho`.
pub fn heat_bounds_oracle(
    rho: &DensityMatrix,
    h: &Hamiltonian,
    beta: f64,
    opts: &OracleOptions,
) -> Result<OracleBounds> {
    let problem = ScalarProblem::from_state(rho, h, beta)?;
    let (x_c, q_c, x_h, q_h) = gibbs_scan(&problem, opts.resolution, opts.zoom_levels)?;
    let y = problem.free_energy();
    let dims = h.dims().to_vec();

    let mut rng = rng_from_seed(opts.seed);
    let extremes = [state_at(h, x_c)?, state_at(h, x_h)?];
    let mut feasible_samples = 0;
    let mut max_excess: f64 = 0.0;
    for i in 0..opts.samples {
        let eta = match i % 4 {
            0 => random_state_with(&mut rng, &dims)?,
            1 => random_pure_state_with(&mut rng, &dims)?,
            2 => random_incoherent_state_with(&mut rng, h)?,
            _ => {
                // Small perturbations of the optimisers probe the boundary.
                let t: f64 = 0.2 * rng.random::<f64>();
                let base = extremes[(i / 4) % 2].clone();
                DensityMatrix::mixture(&[(1.0 - t, base), (t, random_state_with(&mut rng, &dims)?)])?
            }
        };
        if free_energy(&eta, h, beta)? > y {
            continue;
        }
        feasible_samples += 1;
        let q = problem.energy - average_energy(&eta, h)?;
        max_excess = max_excess.max(q_c - q).max(q - q_h);
    }
    Ok(OracleBounds { q_c, q_h, x_c, x_h, feasible_samples, max_excess })
}

/// Solver against oracle on one seeded random state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OracleRow {
    pub dim: usize,
    pub index: usize,
    pub q_c: f64,
    pub q_h: f64,
    pub oracle_q_c: f64,
    pub oracle_q_h: f64,
    pub feasible_samples: usize,
    pub max_excess: f64,
    /// Consistency-identity defect at the left root, 0 when it is the sentinel.
    pub defect_c: f64,
    /// Consistency-identity defect at the right root, 0 when it is absent.
    pub defect_h: f64,
}

impl OracleRow {
    pub fn max_gap(&self) -> f64 {
        (self.q_c - self.oracle_q_c).abs().max((self.q_h - self.oracle_q_h).abs())
    }
}

/// Seed of state `index` of dimension `dim` in a study seeded with `seed`.
fn case_seed(seed: u64, dim: usize, index: usize) -> u64 {
    seed ^ (dim as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (index as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F)
}

/// `count` Ginibre states per dimension on random diagonal Hamiltonians with
/// ground level 0 and the other levels uniform in `(0, 2)`.
/// Rows are ordered by dimension, then index.
pub fn oracle_study(
    dims: &[usize],
    count: usize,
    beta: f64,
    seed: u64,
    opts: &OracleOptions,
) -> Result<Vec<OracleRow>> {
    let cases: Vec<(usize, usize)> = dims.iter().flat_map(|&d| (0..count).map(move |i| (d, i))).collect();
    cases
        .par_iter()
        .map(|&(dim, index)| {
            let mut rng = rng_from_seed(case_seed(seed, dim, index));
            let levels = random_levels_with(&mut rng, dim, 2.0);
            let h = Hamiltonian::from_levels(&levels)?;
            let rho = random_state_with(&mut rng, &[dim])?;
            let problem = ScalarProblem::from_state(&rho, &h, beta)?;
            let bounds = heat_bounds_scalar(&problem)?;
            let roots = find_beta_roots(&problem)?;
            let case_opts = OracleOptions { seed: rng.random(), ..*opts };
            let o = heat_bounds_oracle(&rho, &h, beta, &case_opts)?;
            let defect = |x: f64| if x.is_finite() { root_consistency_defect(&problem, x) } else { 0.0 };
            Ok(OracleRow {
                dim,
                index,
                q_c: bounds.q_c,
                q_h: bounds.q_h,
                oracle_q_c: o.q_c,
                oracle_q_h: o.q_h,
                feasible_samples: o.feasible_samples,
                max_excess: o.max_excess,
                defect_c: defect(roots.beta_c),
                defect_h: roots.beta_h.map_or(0.0, defect),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heat::heat_bounds;

    #[test]
    fn scan_matches_solver_on_mixed_qubit() {
        let h = Hamiltonian::from_levels(&[0.0, 1.0]).unwrap();
        let rho = DensityMatrix::maximally_mixed(vec![2]);
        let opts = OracleOptions { samples: 400, ..Default::default() };
        let o = heat_bounds_oracle(&rho, &h, 1.0, &opts).unwrap();
        let b = heat_bounds(&rho, &h, 1.0).unwrap();
        assert!((o.q_c - b.q_c).abs() < 1e-8);
        assert!((o.q_h - b.q_h).abs() < 1e-8);
        assert!(o.feasible_samples > 0);
        assert!(o.max_excess <= 1e-9);
    }

    #[test]
    fn limits_are_candidates() {
        let h = Hamiltonian::from_levels(&[0.0, 1.0]).unwrap();
        let rho = DensityMatrix::basis_state(1, vec![2]).unwrap();
        let o = heat_bounds_oracle(&rho, &h, 1.0, &OracleOptions { samples: 0, ..Default::default() }).unwrap();
        assert_eq!(o.x_h, f64::INFINITY);
        assert_eq!(o.x_c, f64::NEG_INFINITY);
        assert_eq!((o.q_c, o.q_h), (0.0, 1.0));
    }

    #[test]
    fn study_is_reproducible() {
        let opts = OracleOptions { samples: 50, ..Default::default() };
        let a = oracle_study(&[2, 3], 3, 1.0, 17, &opts).unwrap();
        let b = oracle_study(&[2, 3], 3, 1.0, 17, &opts).unwrap();
        assert_eq!(a, b);
        assert_eq!((a[0].dim, a[3].dim, a[5].index), (2, 3, 2));
        assert!(a.iter().all(|r| r.max_gap() < 1e-6));
    }

    #[test]
    fn low_resolution_rejected() {
        let h = Hamiltonian::from_levels(&[0.0, 1.0]).unwrap();
        let p = ScalarProblem::new(&h, 0.5, 0.5, 1.0).unwrap();
        assert!(matches!(gibbs_scan(&p, 10, 1), Err(Error::Validation(_))));
    }
}
