// SPDX-License-Identifier: Apache-2.0

//! Density matrices, Hamiltonians, partial traces and their JSON file format.

use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_spectrum, tensor_product, ComplexMatrix, Spectrum, C64, HERMITIAN_TOL};

/// Tolerance on `|tr ρ − 1|`.
pub const TRACE_TOL: f64 = 1e-9;
/// Eigenvalues in `[−PSD_TOL, 0)` are read as zero; anything lower is invalid.
pub const PSD_TOL: f64 = 1e-9;

fn check_dims(dims: &[usize], dim: usize) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::Dimension(format!("invalid subsystem dimensions {dims:?}")));
    }
    let product: usize = dims.iter().product();
    if product != dim {
        return Err(Error::Dimension(format!(
            "subsystem dimensions {dims:?} multiply to {product}, matrix has dimension {dim}"
        )));
    }
    Ok(())
}

/// Positive semidefinite, unit-trace Hermitian matrix over a composite space.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
    spectrum: OnceLock<Spectrum>,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, matrix.dim())?;
        let defect = matrix.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::Validation(format!("density matrix is not Hermitian (defect {defect:e})")));
        }
        let tr = matrix.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::Validation(format!("density matrix trace is {tr}, expected 1")));
        }
        let spectrum = hermitian_spectrum(&matrix)?;
        let min = spectrum.eigenvalues.first().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::Validation(format!("density matrix has negative eigenvalue {min:e}")));
        }
        Ok(Self { matrix, dims, spectrum: OnceLock::from(spectrum) })
    }

    /// Skips validation; callers guarantee the invariants by construction.
    pub(crate) fn from_trusted(matrix: ComplexMatrix, dims: Vec<usize>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), matrix.dim());
        Self { matrix, dims, spectrum: OnceLock::new() }
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalised) vector.
    pub fn from_pure(psi: &[C64], dims: Vec<usize>) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Validation("state vector has zero or non-finite norm".into()));
        }
        let normed: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        check_dims(&dims, psi.len())?;
        Ok(Self::from_trusted(ComplexMatrix::outer(&normed), dims))
    }

    pub fn from_diagonal(probs: &[f64], dims: Vec<usize>) -> Result<Self> {
        Self::new(ComplexMatrix::from_diagonal(probs), dims)
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let d: usize = dims.iter().product();
        Self::from_trusted(ComplexMatrix::identity(d).scale(1.0 / d as f64), dims)
    }

    /// Computational basis state `|k⟩⟨k|`.
    pub fn basis_state(k: usize, dims: Vec<usize>) -> Result<Self> {
        let d: usize = dims.iter().product();
        if k >= d {
            return Err(Error::Dimension(format!("basis index {k} out of range for dimension {d}")));
        }
        let mut probs = vec![0.0; d];
        probs[k] = 1.0;
        Ok(Self::from_trusted(ComplexMatrix::from_diagonal(&probs), dims))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn spectrum(&self) -> &Spectrum {
        self.spectrum
            .get_or_init(|| hermitian_spectrum(&self.matrix.hermitian_part()).expect("hermitian part is Hermitian"))
    }

    /// Eigenvalues, ascending, with float noise below zero clamped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.spectrum().eigenvalues.iter().map(|&l| l.max(0.0)).collect()
    }

    /// Diagonal in the computational basis.
    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal_real()
    }

    /// `U ρ U†`.
    pub fn evolve(&self, unitary: &ComplexMatrix) -> Self {
        Self::from_trusted(self.matrix.conjugate_by(unitary).hermitian_part(), self.dims.clone())
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::from_trusted(tensor_product(&self.matrix, &other.matrix), dims)
    }

    /// Convex combination `Σ w_k ρ_k`; weights must be nonnegative and sum to one.
    pub fn mixture(terms: &[(f64, DensityMatrix)]) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::Validation("empty mixture".into()))?;
        let dims = first.1.dims.clone();
        let total: f64 = terms.iter().map(|t| t.0).sum();
        if terms.iter().any(|t| t.0 < 0.0) || (total - 1.0).abs() > TRACE_TOL {
            return Err(Error::Validation("mixture weights must be nonnegative and sum to one".into()));
        }
        let mut acc = ComplexMatrix::zeros(first.1.dim());
        for (w, rho) in terms {
            if rho.dims != dims {
                return Err(Error::Dimension("mixture components have different dimensions".into()));
            }
            acc = &acc + &rho.matrix.scale(*w);
        }
        Ok(Self::from_trusted(acc, dims))
    }

    pub fn to_file(&self) -> MatrixFile {
        MatrixFile::from_matrix(&self.matrix, &self.dims)
    }

    pub fn from_file(file: &MatrixFile) -> Result<Self> {
        let (m, dims) = file.to_matrix()?;
        Self::new(m, dims)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_file(&MatrixFile::load(path)?)
    }
}

/// Hermitian observable with its spectrum computed once at construction.
#[derive(Clone, Debug)]
pub struct Hamiltonian {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
    spectrum: Spectrum,
}

impl Hamiltonian {
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, matrix.dim())?;
        let spectrum = hermitian_spectrum(&matrix)?;
        Ok(Self { matrix: matrix.hermitian_part(), dims, spectrum })
    }

    pub fn from_levels(levels: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_diagonal(levels), vec![levels.len()])
    }

    /// `diag(0, 1, …, d−1)`.
    pub fn ladder(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Dimension("ladder needs at least one level".into()));
        }
        let levels: Vec<f64> = (0..d).map(|n| n as f64).collect();
        Self::from_levels(&levels)
    }

    /// Non-interacting sum `Σ_k 1 ⊗ … ⊗ H_k ⊗ … ⊗ 1`.
    pub fn local_sum(locals: &[Hamiltonian]) -> Result<Self> {
        if locals.is_empty() {
            return Err(Error::Dimension("no local Hamiltonians given".into()));
        }
        let dims: Vec<usize> = locals.iter().map(|h| h.dim()).collect();
        let total: usize = dims.iter().product();
        let mut acc = ComplexMatrix::zeros(total);
        for (k, h) in locals.iter().enumerate() {
            let left: usize = dims[..k].iter().product();
            let right: usize = dims[k + 1..].iter().product();
            let term = tensor_product(
                &tensor_product(&ComplexMatrix::identity(left), &h.matrix),
                &ComplexMatrix::identity(right),
            );
            acc = &acc + &term;
        }
        Self::new(acc, dims)
    }

    /// Same operator with energies multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.matrix.scale(c), self.dims.clone())
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// Ascending energies.
    pub fn levels(&self) -> &[f64] {
        &self.spectrum.eigenvalues
    }

    pub fn ground_energy(&self) -> f64 {
        self.spectrum.eigenvalues[0]
    }

    pub fn top_energy(&self) -> f64 {
        *self.spectrum.eigenvalues.last().expect("nonempty spectrum")
    }

    pub fn spectral_range(&self) -> f64 {
        self.top_energy() - self.ground_energy()
    }

    pub fn to_file(&self) -> MatrixFile {
        MatrixFile::from_matrix(&self.matrix, &self.dims)
    }

    pub fn from_file(file: &MatrixFile) -> Result<Self> {
        let (m, dims) = file.to_matrix()?;
        Self::new(m, dims)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_file(&MatrixFile::load(path)?)
    }
}

/// On-disk layout for states and Hamiltonians:
/// `{ "dims": [d1, d2, ...], "re": [...], "im": [...] }`, row-major,
/// leftmost subsystem slowest, `(Π d_i)²` entries in each array.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dims: Vec<usize>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix, dims: &[usize]) -> Self {
        let entries = m.to_row_major();
        Self {
            dims: dims.to_vec(),
            re: entries.iter().map(|z| z.re).collect(),
            im: entries.iter().map(|z| z.im).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<(ComplexMatrix, Vec<usize>)> {
        let dim: usize = self.dims.iter().product();
        check_dims(&self.dims, dim)?;
        if self.re.len() != dim * dim || self.im.len() != dim * dim {
            return Err(Error::Validation(format!(
                "expected {} entries for dims {:?}, got re={} im={}",
                dim * dim,
                self.dims,
                self.re.len(),
                self.im.len()
            )));
        }
        if self.re.iter().chain(&self.im).any(|x| !x.is_finite()) {
            return Err(Error::Validation("matrix entries must be finite".into()));
        }
        Ok((ComplexMatrix::from_re_im(dim, &self.re, &self.im)?, self.dims.clone()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Validation(format!("malformed matrix JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serialises")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

/// Reduced matrix over the subsystems in `keep`, in their original order.
pub fn partial_trace_matrix(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<(ComplexMatrix, Vec<usize>)> {
    check_dims(dims, m.dim())?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.is_empty() || kept.len() != keep.len() {
        return Err(Error::Dimension(format!("keep set {keep:?} must be nonempty without repeats")));
    }
    if let Some(&bad) = kept.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::Dimension(format!("subsystem index {bad} out of range for {} subsystems", dims.len())));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !kept.contains(k)).collect();

    let mut strides = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    // Offsets into the full index contributed by each kept / traced multi-index.
    let offsets = |subs: &[usize]| -> Vec<usize> {
        let mut out = vec![0usize];
        for &s in subs {
            let stride = strides[s];
            out = out.iter().flat_map(|&o| (0..dims[s]).map(move |i| o + i * stride)).collect();
        }
        out
    };
    let kept_off = offsets(&kept);
    let traced_off = offsets(&traced);
    let a = m.as_matrix();
    let n = kept_off.len();
    let mut entries = Vec::with_capacity(n * n);
    for &r in &kept_off {
        for &c in &kept_off {
            entries.push(traced_off.iter().map(|&t| a[(r + t, c + t)]).sum::<C64>());
        }
    }
    let kept_dims = kept.iter().map(|&k| dims[k]).collect();
    Ok((ComplexMatrix::from_row_major(n, &entries)?, kept_dims))
}

/// Marginal of `rho` on the subsystems listed in `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let (m, dims) = partial_trace_matrix(rho.matrix(), rho.dims(), keep)?;
    Ok(DensityMatrix::from_trusted(m.hermitian_part(), dims))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0)];
        DensityMatrix::from_pure(&psi, vec![2, 2]).unwrap()
    }

    #[test]
    fn product_reduces_to_factor() {
        let a = DensityMatrix::from_diagonal(&[0.7, 0.3], vec![2]).unwrap();
        let b = DensityMatrix::from_diagonal(&[0.2, 0.5, 0.3], vec![3]).unwrap();
        let ab = a.tensor(&b);
        let ra = partial_trace(&ab, &[0]).unwrap();
        let rb = partial_trace(&ab, &[1]).unwrap();
        assert!((ra.matrix() - a.matrix()).max_abs() < 1e-12);
        assert!((rb.matrix() - b.matrix()).max_abs() < 1e-12);
        assert_eq!(rb.dims(), &[3]);
    }

    #[test]
    fn bell_marginal_is_mixed() {
        let r = partial_trace(&bell(), &[0]).unwrap();
        assert!((r.matrix() - &ComplexMatrix::identity(2).scale(0.5)).max_abs() < 1e-15);
    }

    #[test]
    fn keep_order_is_original_order() {
        let a = DensityMatrix::basis_state(1, vec![2]).unwrap();
        let b = DensityMatrix::maximally_mixed(vec![3]);
        let c = DensityMatrix::basis_state(0, vec![2]).unwrap();
        let abc = a.tensor(&b).tensor(&c);
        let ac = partial_trace(&abc, &[2, 0]).unwrap();
        assert_eq!(ac.dims(), &[2, 2]);
        // |1⟩⊗|0⟩ is flat index 2.
        assert!((ac.populations()[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn partial_trace_errors() {
        let rho = bell();
        assert!(matches!(partial_trace(&rho, &[2]), Err(Error::Dimension(_))));
        assert!(matches!(partial_trace(&rho, &[]), Err(Error::Dimension(_))));
        assert!(matches!(partial_trace(&rho, &[0, 0]), Err(Error::Dimension(_))));
    }

    #[test]
    fn validation_rejects_bad_states() {
        let neg = ComplexMatrix::from_diagonal(&[1.1, -0.1]);
        assert!(matches!(DensityMatrix::new(neg, vec![2]), Err(Error::Validation(_))));
        let trace = ComplexMatrix::from_diagonal(&[0.5, 0.4]);
        assert!(matches!(DensityMatrix::new(trace, vec![2]), Err(Error::Validation(_))));
        let nonherm = ComplexMatrix::from_real_rows(&[&[0.5, 0.1], &[0.0, 0.5]]).unwrap();
        assert!(matches!(DensityMatrix::new(nonherm, vec![2]), Err(Error::Validation(_))));
        let dims = ComplexMatrix::identity(4).scale(0.25);
        assert!(matches!(DensityMatrix::new(dims, vec![2, 3]), Err(Error::Dimension(_))));
    }

    #[test]
    fn tiny_negative_eigenvalues_are_clamped() {
        let m = ComplexMatrix::from_diagonal(&[1.0 + 5e-10, -5e-10]);
        let rho = DensityMatrix::new(m, vec![2]).unwrap();
        assert_eq!(rho.eigenvalues()[0], 0.0);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let rho = bell();
        let text = rho.to_file().to_json();
        let back = DensityMatrix::from_file(&MatrixFile::from_json(&text).unwrap()).unwrap();
        assert!((back.matrix() - rho.matrix()).max_abs() < 1e-15);
        assert_eq!(back.dims(), &[2, 2]);

        let short = r#"{"dims":[2],"re":[1,0,0],"im":[0,0,0]}"#;
        assert!(DensityMatrix::from_file(&MatrixFile::from_json(short).unwrap()).is_err());
        assert!(MatrixFile::from_json("{not json").is_err());
        let h = r#"{"dims":[2],"re":[0,0,0,1],"im":[0,0,0,0]}"#;
        let h = Hamiltonian::from_file(&MatrixFile::from_json(h).unwrap()).unwrap();
        assert_eq!(h.levels(), &[0.0, 1.0]);
    }

    #[test]
    fn local_sum_of_ladders() {
        let l = Hamiltonian::ladder(2).unwrap();
        let h = Hamiltonian::local_sum(&[l.clone(), l]).unwrap();
        assert_eq!(h.levels(), &[0.0, 1.0, 1.0, 2.0]);
        assert_eq!(h.dims(), &[2, 2]);
    }
}
