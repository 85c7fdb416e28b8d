// SPDX-License-Identifier: Apache-2.0

//! Gibbs states, entropies, energies and free energies.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::state::{partial_trace, DensityMatrix, Hamiltonian};

/// Weight below which a density-matrix eigenvalue is treated as outside the
/// support of a reference state in [`relative_entropy`].
const SUPPORT_EIG_TOL: f64 = 1e-12;
const SUPPORT_WEIGHT_TOL: f64 = 1e-10;

/// Degeneracy window for the extremal energy levels.
fn level_tol(levels: &[f64]) -> f64 {
    let scale = levels.iter().fold(1.0_f64, |m, e| m.max(e.abs()));
    1e-12 * scale
}

/// The one-parameter family `γ(x) = e^{−xH}/Z(x)`, `x ∈ ℝ`, evaluated on the
/// ascending energy levels of `H`.
///
/// Exponents are shifted by the ground level for `x ≥ 0` and by the top level
/// for `x < 0`, so every exponent is nonpositive and `log Z` is evaluated as a
/// sum of terms in `(0, 1]`.
#[derive(Clone, Copy, Debug)]
pub struct GibbsFamily<'a> {
    levels: &'a [f64],
}

/// Energy and entropy of one member (or limit) of the Gibbs family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalPoint {
    pub energy: f64,
    pub entropy: f64,
}

impl ThermalPoint {
    pub fn free_energy(&self, beta: f64) -> f64 {
        self.energy - self.entropy / beta
    }
}

impl<'a> GibbsFamily<'a> {
    pub fn new(levels: &'a [f64]) -> Self {
        debug_assert!(levels.windows(2).all(|w| w[0] <= w[1]), "levels must be ascending");
        Self { levels }
    }

    pub fn of(h: &'a Hamiltonian) -> Self {
        Self::new(h.levels())
    }

    pub fn levels(&self) -> &[f64] {
        self.levels
    }

    fn reference(&self, x: f64) -> f64 {
        if x >= 0.0 {
            self.levels[0]
        } else {
            self.levels[self.levels.len() - 1]
        }
    }

    /// Shifted exponents `a_i ≤ 0` and `ln Σ e^{a_i}`.
    fn shifted(&self, x: f64) -> (Vec<f64>, f64) {
        let r = self.reference(x);
        let a: Vec<f64> = self.levels.iter().map(|&e| -x * (e - r)).collect();
        let lz = a.iter().map(|&ai| ai.exp()).sum::<f64>().ln();
        (a, lz)
    }

    /// Populations of `γ(x)` in ascending-energy order.
    pub fn weights(&self, x: f64) -> Vec<f64> {
        let (a, lz) = self.shifted(x);
        a.iter().map(|&ai| (ai - lz).exp()).collect()
    }

    /// `ln tr e^{−xH}`.
    pub fn log_partition(&self, x: f64) -> f64 {
        let (_, lz) = self.shifted(x);
        lz - x * self.reference(x)
    }

    pub fn point(&self, x: f64) -> ThermalPoint {
        let r = self.reference(x);
        let (a, lz) = self.shifted(x);
        let mut energy = 0.0;
        let mut entropy = 0.0;
        for (&ai, &e) in a.iter().zip(self.levels) {
            let p = (ai - lz).exp();
            energy += p * (e - r);
            entropy += p * (lz - ai);
        }
        ThermalPoint { energy: r + energy, entropy }
    }

    pub fn energy(&self, x: f64) -> f64 {
        self.point(x).energy
    }

    pub fn entropy(&self, x: f64) -> f64 {
        self.point(x).entropy
    }

    /// `F_β(γ(x)) = E(γ(x)) − S(γ(x))/β`.
    pub fn free_energy(&self, x: f64, beta: f64) -> f64 {
        self.point(x).free_energy(beta)
    }

    /// Energy variance of `γ(x)`, the slope `−dE/dx`.
    pub fn energy_variance(&self, x: f64) -> f64 {
        let w = self.weights(x);
        let r = self.reference(x);
        let mean: f64 = w.iter().zip(self.levels).map(|(p, e)| p * (e - r)).sum();
        w.iter().zip(self.levels).map(|(p, e)| p * (e - r - mean).powi(2)).sum()
    }

    pub fn ground_multiplicity(&self) -> usize {
        let tol = level_tol(self.levels);
        self.levels.iter().take_while(|&&e| e - self.levels[0] <= tol).count()
    }

    pub fn top_multiplicity(&self) -> usize {
        let tol = level_tol(self.levels);
        let top = self.levels[self.levels.len() - 1];
        self.levels.iter().rev().take_while(|&&e| top - e <= tol).count()
    }

    /// `x → +∞`: uniform mixture over the ground eigenspace.
    pub fn ground_limit(&self) -> ThermalPoint {
        ThermalPoint { energy: self.levels[0], entropy: (self.ground_multiplicity() as f64).ln() }
    }

    /// `x → −∞`: uniform mixture over the top eigenspace.
    pub fn top_limit(&self) -> ThermalPoint {
        ThermalPoint { energy: self.levels[self.levels.len() - 1], entropy: (self.top_multiplicity() as f64).ln() }
    }
}

/// Which end of the Gibbs family a limit state sits at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GibbsLimit {
    /// `x → +∞`.
    Ground,
    /// `x → −∞`.
    Top,
}

/// `e^{−xH}/Z(x)` for any finite real `x`; negative `x` gives population inversion.
pub fn gibbs_state(h: &Hamiltonian, x: f64) -> Result<DensityMatrix> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("inverse temperature must be finite, got {x}")));
    }
    let w = GibbsFamily::of(h).weights(x);
    let weights: Vec<C64> = w.iter().map(|&p| C64::new(p, 0.0)).collect();
    let m = h.spectrum().with_weights(&weights).hermitian_part();
    Ok(DensityMatrix::from_trusted(m, h.dims().to_vec()))
}

/// Limit of [`gibbs_state`] as `x → ±∞`, uniform on the extremal eigenspace.
pub fn gibbs_limit_state(h: &Hamiltonian, limit: GibbsLimit) -> DensityMatrix {
    let family = GibbsFamily::of(h);
    let d = h.dim();
    let mut w = vec![C64::new(0.0, 0.0); d];
    match limit {
        GibbsLimit::Ground => {
            let m = family.ground_multiplicity();
            w[..m].iter_mut().for_each(|z| *z = C64::new(1.0 / m as f64, 0.0));
        }
        GibbsLimit::Top => {
            let m = family.top_multiplicity();
            w[d - m..].iter_mut().for_each(|z| *z = C64::new(1.0 / m as f64, 0.0));
        }
    }
    DensityMatrix::from_trusted(h.spectrum().with_weights(&w).hermitian_part(), h.dims().to_vec())
}

/// `ln tr e^{−xH}`.
pub fn log_partition(h: &Hamiltonian, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("inverse temperature must be finite, got {x}")));
    }
    Ok(GibbsFamily::of(h).log_partition(x))
}

/// `−Σ p ln p` with `0 ln 0 = 0`.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum()
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    shannon_entropy(&rho.eigenvalues())
}

/// `h(p) = −p ln p − (1−p) ln(1−p)`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("binary entropy needs p in [0, 1], got {p}")));
    }
    Ok(shannon_entropy(&[p, 1.0 - p]))
}

fn same_dims(a: &DensityMatrix, b_dims: &[usize], what: &str) -> Result<()> {
    if a.dims() != b_dims {
        return Err(Error::Dimension(format!("{what}: dimensions {:?} and {:?} differ", a.dims(), b_dims)));
    }
    Ok(())
}

/// `D(ρ‖σ) = tr ρ(ln ρ − ln σ)`; `f64::INFINITY` when `supp ρ ⊄ supp σ`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dims(rho, sigma.dims(), "relative entropy")?;
    let s = sigma.spectrum();
    let weights = s.basis_expectations(rho.matrix());
    let mut cross = 0.0;
    for (&lambda, w) in s.eigenvalues.iter().zip(&weights) {
        let w = w.re;
        if lambda < SUPPORT_EIG_TOL {
            if w > SUPPORT_WEIGHT_TOL {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += w * lambda.ln();
    }
    Ok((-von_neumann_entropy(rho) - cross).max(0.0))
}

fn check_partition(rho: &DensityMatrix, a: &[usize], b: &[usize]) -> Result<()> {
    let n = rho.dims().len();
    let mut all: Vec<usize> = a.iter().chain(b).copied().collect();
    all.sort_unstable();
    let expected: Vec<usize> = (0..n).collect();
    if a.is_empty() || b.is_empty() || all != expected {
        return Err(Error::Dimension(format!("{a:?} and {b:?} do not partition {n} subsystems")));
    }
    Ok(())
}

/// `S(A|B) = S(ρ_AB) − S(ρ_B)`.
pub fn conditional_entropy(rho: &DensityMatrix, a: &[usize], b: &[usize]) -> Result<f64> {
    check_partition(rho, a, b)?;
    let rho_b = partial_trace(rho, b)?;
    Ok(von_neumann_entropy(rho) - von_neumann_entropy(&rho_b))
}

/// `I(A:B) = S(ρ_A) + S(ρ_B) − S(ρ_AB)`.
pub fn mutual_information(rho: &DensityMatrix, a: &[usize], b: &[usize]) -> Result<f64> {
    check_partition(rho, a, b)?;
    let sa = von_neumann_entropy(&partial_trace(rho, a)?);
    let sb = von_neumann_entropy(&partial_trace(rho, b)?);
    Ok(sa + sb - von_neumann_entropy(rho))
}

/// `tr[ρH]`.
pub fn average_energy(rho: &DensityMatrix, h: &Hamiltonian) -> Result<f64> {
    same_dims(rho, h.dims(), "average energy")?;
    let e = rho.matrix().trace_product(h.matrix());
    if e.im.abs() > 1e-8 {
        return Err(Error::Numerical(format!("energy has imaginary part {:e}", e.im)));
    }
    Ok(e.re)
}

/// `F_β(ρ) = E(ρ) − S(ρ)/β`.
pub fn free_energy(rho: &DensityMatrix, h: &Hamiltonian, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(average_energy(rho, h)? - von_neumann_entropy(rho) / beta)
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Domain(format!("inverse temperature must be positive and finite, got {beta}")));
    }
    Ok(())
}

/// Projection onto the diagonal of `h`'s eigenbasis.
pub fn dephase(rho: &DensityMatrix, h: &Hamiltonian) -> Result<DensityMatrix> {
    same_dims(rho, h.dims(), "dephasing")?;
    let pops: Vec<C64> =
        h.spectrum().basis_expectations(rho.matrix()).iter().map(|z| C64::new(z.re.max(0.0), 0.0)).collect();
    let m = h.spectrum().with_weights(&pops).hermitian_part();
    Ok(DensityMatrix::from_trusted(m, rho.dims().to_vec()))
}

/// `S(dephase(ρ)) − S(ρ)`, the relative entropy of coherence.
pub fn rel_entropy_of_coherence(rho: &DensityMatrix, h: &Hamiltonian) -> Result<f64> {
    let d = dephase(rho, h)?;
    Ok(von_neumann_entropy(&d) - von_neumann_entropy(rho))
}

/// `‖ρ − σ‖₁` without the ½ prefactor.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dims(rho, sigma.dims(), "trace distance")?;
    Ok(trace_norm_hermitian(&(rho.matrix() - sigma.matrix())))
}

/// `Σ |λ_i|` of a Hermitian matrix.
pub fn trace_norm_hermitian(m: &ComplexMatrix) -> f64 {
    m.hermitian_part().as_matrix().clone().symmetric_eigenvalues().iter().map(|l| l.abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn qubit_h() -> Hamiltonian {
        Hamiltonian::from_levels(&[0.0, 1.0]).unwrap()
    }

    fn plus() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::from_pure(&[C64::new(s, 0.0), C64::new(s, 0.0)], vec![2]).unwrap()
    }

    #[test]
    fn gibbs_at_zero_is_maximally_mixed() {
        let h = Hamiltonian::from_levels(&[0.0, 0.4, 2.5]).unwrap();
        let g = gibbs_state(&h, 0.0).unwrap();
        assert!((g.matrix() - &ComplexMatrix::identity(3).scale(1.0 / 3.0)).max_abs() < 1e-15);
    }

    #[test]
    fn gibbs_at_ln2() {
        let g = gibbs_state(&qubit_h(), LN_2).unwrap();
        let p = g.populations();
        assert!((p[0] - 2.0 / 3.0).abs() < 1e-15 && (p[1] - 1.0 / 3.0).abs() < 1e-15);
        assert!((log_partition(&qubit_h(), LN_2).unwrap() - 1.5_f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn gibbs_large_x_and_limits() {
        let g = gibbs_state(&qubit_h(), 800.0).unwrap();
        assert_eq!(g.populations()[0], 1.0);
        let inv = gibbs_state(&qubit_h(), -800.0).unwrap();
        assert_eq!(inv.populations()[1], 1.0);
        let h = Hamiltonian::from_levels(&[0.0, 0.0, 1.0]).unwrap();
        let lim = gibbs_limit_state(&h, GibbsLimit::Ground);
        assert!((lim.populations()[0] - 0.5).abs() < 1e-15);
        assert!((von_neumann_entropy(&lim) - LN_2).abs() < 1e-14);
        assert!(gibbs_state(&h, f64::NAN).is_err());
    }

    #[test]
    fn log_partition_values() {
        let h = Hamiltonian::ladder(3).unwrap();
        assert!((log_partition(&h, 0.0).unwrap() - 3f64.ln()).abs() < 1e-15);
        let expect = (1.0 + (-1.0f64).exp() + (-2.0f64).exp()).ln();
        assert!((log_partition(&h, 1.0).unwrap() - expect).abs() < 1e-15);
        // Stable far from the origin.
        let big = log_partition(&h, 1e4).unwrap();
        assert!(big.abs() < 1e-12);
        let neg = log_partition(&h, -1e4).unwrap();
        assert!((neg - 2e4).abs() < 1e-9);
    }

    #[test]
    fn entropy_values() {
        assert!((von_neumann_entropy(&DensityMatrix::maximally_mixed(vec![5])) - 5f64.ln()).abs() < 1e-14);
        assert!(von_neumann_entropy(&plus()).abs() < 1e-12);
        let r = DensityMatrix::from_diagonal(&[2.0 / 3.0, 1.0 / 3.0], vec![2]).unwrap();
        let expect = 3f64.ln() - 2.0 / 3.0 * LN_2;
        assert!((von_neumann_entropy(&r) - expect).abs() < 1e-14);
        assert!((expect - 0.6365).abs() < 1e-4);
    }

    #[test]
    fn binary_entropy_values() {
        assert!((binary_entropy(0.5).unwrap() - LN_2).abs() < 1e-15);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        let expect = -0.25 * 0.25f64.ln() - 0.75 * 0.75f64.ln();
        assert!((binary_entropy(0.25).unwrap() - expect).abs() < 1e-15);
        assert!((expect - 0.5623).abs() < 1e-4);
        assert!(matches!(binary_entropy(1.5), Err(Error::Domain(_))));
        assert!(binary_entropy(-0.1).is_err());
    }

    #[test]
    fn relative_entropy_cases() {
        let rho = DensityMatrix::from_diagonal(&[0.3, 0.7], vec![2]).unwrap();
        assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-14);
        let ket0 = DensityMatrix::basis_state(0, vec![2]).unwrap();
        let mixed = DensityMatrix::maximally_mixed(vec![2]);
        assert!((relative_entropy(&ket0, &mixed).unwrap() - LN_2).abs() < 1e-14);
        assert_eq!(relative_entropy(&mixed, &ket0).unwrap(), f64::INFINITY);
        assert!(relative_entropy(&mixed, &DensityMatrix::maximally_mixed(vec![3])).is_err());
    }

    #[test]
    fn conditional_entropy_and_mutual_information() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let zero = C64::new(0.0, 0.0);
        let bell = DensityMatrix::from_pure(&[C64::new(s, 0.0), zero, zero, C64::new(s, 0.0)], vec![2, 2]).unwrap();
        assert!((conditional_entropy(&bell, &[0], &[1]).unwrap() + LN_2).abs() < 1e-12);
        assert!((mutual_information(&bell, &[0], &[1]).unwrap() - 2.0 * LN_2).abs() < 1e-12);
        let prod = DensityMatrix::maximally_mixed(vec![2, 2]);
        assert!((conditional_entropy(&prod, &[0], &[1]).unwrap() - LN_2).abs() < 1e-12);
        assert!(mutual_information(&prod, &[0], &[1]).unwrap().abs() < 1e-12);
        assert!(conditional_entropy(&prod, &[0], &[0]).is_err());
        assert!(conditional_entropy(&prod, &[0], &[]).is_err());
    }

    #[test]
    fn energies_and_free_energies() {
        let h = qubit_h();
        let mixed = DensityMatrix::maximally_mixed(vec![2]);
        assert!((average_energy(&mixed, &h).unwrap() - 0.5).abs() < 1e-15);
        let ket0 = DensityMatrix::basis_state(0, vec![2]).unwrap();
        assert_eq!(average_energy(&ket0, &h).unwrap(), 0.0);
        let excited = DensityMatrix::basis_state(1, vec![2]).unwrap();
        let h3 = Hamiltonian::from_levels(&[0.0, 3.0]).unwrap();
        assert!((free_energy(&excited, &h3, 0.7).unwrap() - 3.0).abs() < 1e-15);
        assert!((free_energy(&mixed, &h, 1.0).unwrap() - (0.5 - LN_2)).abs() < 1e-15);
        assert!(matches!(free_energy(&mixed, &h, 0.0), Err(Error::Domain(_))));
        for beta in [0.3, 1.0, 4.0] {
            let g = gibbs_state(&h, beta).unwrap();
            let f = free_energy(&g, &h, beta).unwrap();
            assert!((f + log_partition(&h, beta).unwrap() / beta).abs() < 1e-13);
        }
    }

    #[test]
    fn ladder_marginal_energy() {
        for d in 2..6 {
            let h = Hamiltonian::ladder(d).unwrap();
            let e = average_energy(&DensityMatrix::maximally_mixed(vec![d]), &h).unwrap();
            assert!((e - (d as f64 - 1.0) / 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn dephasing_and_coherence() {
        let h = qubit_h();
        let diag = DensityMatrix::from_diagonal(&[0.2, 0.8], vec![2]).unwrap();
        assert!((dephase(&diag, &h).unwrap().matrix() - diag.matrix()).max_abs() < 1e-15);
        assert!(rel_entropy_of_coherence(&diag, &h).unwrap().abs() < 1e-14);
        let d = dephase(&plus(), &h).unwrap();
        assert!((d.matrix() - &ComplexMatrix::identity(2).scale(0.5)).max_abs() < 1e-15);
        assert!((rel_entropy_of_coherence(&plus(), &h).unwrap() - LN_2).abs() < 1e-12);
    }

    #[test]
    fn trace_distance_cases() {
        let a = DensityMatrix::basis_state(0, vec![2]).unwrap();
        let b = DensityMatrix::basis_state(1, vec![2]).unwrap();
        assert!((trace_distance(&a, &b).unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(trace_distance(&a, &a).unwrap(), 0.0);
        let p = DensityMatrix::from_diagonal(&[0.7, 0.3], vec![2]).unwrap();
        let q = DensityMatrix::maximally_mixed(vec![2]);
        assert!((trace_distance(&p, &q).unwrap() - 0.4).abs() < 1e-14);
        assert!(trace_distance(&p, &DensityMatrix::maximally_mixed(vec![3])).is_err());
    }

    #[test]
    fn family_matches_state() {
        let h = Hamiltonian::from_levels(&[-0.5, 0.1, 0.1, 2.0]).unwrap();
        let fam = GibbsFamily::of(&h);
        for x in [-3.0, -0.2, 0.0, 0.9, 7.0] {
            let g = gibbs_state(&h, x).unwrap();
            let pt = fam.point(x);
            assert!((pt.energy - average_energy(&g, &h).unwrap()).abs() < 1e-13);
            assert!((pt.entropy - von_neumann_entropy(&g)).abs() < 1e-12);
        }
        assert_eq!(fam.ground_multiplicity(), 1);
        assert_eq!(fam.top_multiplicity(), 1);
    }
}
