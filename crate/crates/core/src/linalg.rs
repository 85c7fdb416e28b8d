// SPDX-License-Identifier: Apache-2.0

//! Dense complex matrices and Hermitian eigendecomposition.

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Maximum Hermiticity defect accepted by [`hermitian_spectrum`].
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Square complex matrix. Serialised row-major; stored in `nalgebra`'s
/// column-major layout.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::Dimension(format!(
                "expected a nonempty square matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self(m))
    }

    pub fn from_row_major(dim: usize, entries: &[C64]) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::Dimension(format!("{} entries do not form a {dim}x{dim} matrix", entries.len())));
        }
        Ok(Self(DMatrix::from_row_slice(dim, dim, entries)))
    }

    /// Builds a matrix from separate real and imaginary row-major parts.
    pub fn from_re_im(dim: usize, re: &[f64], im: &[f64]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::Dimension(format!("real part has {} entries, imaginary part {}", re.len(), im.len())));
        }
        let entries: Vec<C64> = re.iter().zip(im).map(|(&r, &i)| C64::new(r, i)).collect();
        Self::from_row_major(dim, &entries)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        let entries: Vec<C64> = rows.iter().flat_map(|r| r.iter().map(|&x| C64::new(x, 0.0))).collect();
        Self::from_row_major(dim, &entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self(DMatrix::from_fn(n, n, |i, j| if i == j { C64::new(diag[i], 0.0) } else { C64::new(0.0, 0.0) }))
    }

    /// `|ψ⟩⟨ψ|` (no normalisation applied).
    pub fn outer(psi: &[C64]) -> Self {
        let n = psi.len();
        Self(DMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj()))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn to_row_major(&self) -> Vec<C64> {
        let n = self.dim();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| self.0[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    pub fn diagonal_real(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0[(i, i)].re).collect()
    }

    /// `max |a_ij − conj(a_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()).map(|z| z * 0.5))
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.0[(i, j)] == C64::new(0.0, 0.0)))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    /// `tr(A B)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> C64 {
        let n = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self.0[(i, k)] * other.0[(k, i)];
            }
        }
        acc
    }

    /// `A B A†`.
    pub fn conjugate_by(&self, unitary: &Self) -> Self {
        Self(&unitary.0 * &self.0 * unitary.0.adjoint())
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    /// Sum of singular values.
    pub fn trace_norm(&self) -> f64 {
        self.0.clone().svd(false, false).singular_values.iter().sum()
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

/// Kronecker product; the index of `a` varies slowest.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix(a.0.kronecker(&b.0))
}

/// Kronecker product of a list of factors, left to right.
pub fn tensor_product_all(factors: &[&ComplexMatrix]) -> ComplexMatrix {
    let mut iter = factors.iter();
    let first = match iter.next() {
        Some(m) => (*m).clone(),
        None => return ComplexMatrix::identity(1),
    };
    iter.fold(first, |acc, m| tensor_product(&acc, m))
}

/// Eigendecomposition `A = V diag(λ) V†` of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unitary whose columns are the eigenvectors.
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.0.column(k).iter().copied().collect()
    }

    /// `V diag(f(λ)) V†`.
    pub fn map<F: Fn(f64) -> C64>(&self, f: F) -> ComplexMatrix {
        let weights: Vec<C64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        self.with_weights(&weights)
    }

    /// `V diag(w) V†` for arbitrary complex weights.
    pub fn with_weights(&self, weights: &[C64]) -> ComplexMatrix {
        let v = &self.eigenvectors.0;
        let n = v.nrows();
        let mut scaled = v.clone();
        for (k, w) in weights.iter().enumerate() {
            scaled.column_mut(k).iter_mut().for_each(|z| *z *= *w);
        }
        debug_assert_eq!(weights.len(), n);
        ComplexMatrix(scaled * v.adjoint())
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|l| C64::new(l, 0.0))
    }

    /// Diagonal of `V† A V` (expectations of `A` in the eigenbasis).
    pub fn basis_expectations(&self, a: &ComplexMatrix) -> Vec<C64> {
        let v = &self.eigenvectors.0;
        let av = &a.0 * v;
        (0..v.ncols()).map(|k| v.column(k).iter().zip(av.column(k).iter()).map(|(x, y)| x.conj() * y).sum()).collect()
    }
}

/// Ascending eigenvalues and phase-fixed eigenvectors of a Hermitian matrix.
///
/// Each eigenvector is rotated so its first significant component is real and
/// positive. Ties are ordered by the position of that component, which makes
/// the basis chosen inside degenerate eigenspaces deterministic. Exactly
/// diagonal inputs keep the computational basis.
pub fn hermitian_spectrum(a: &ComplexMatrix) -> Result<Spectrum> {
    let defect = a.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::Validation(format!("matrix is not Hermitian (defect {defect:e})")));
    }
    let n = a.dim();
    if a.is_diagonal() {
        let diag = a.diagonal_real();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));
        let eigenvalues = order.iter().map(|&i| diag[i]).collect();
        let vecs =
            DMatrix::from_fn(n, n, |row, col| if row == order[col] { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) });
        return Ok(Spectrum { eigenvalues, eigenvectors: ComplexMatrix(vecs) });
    }

    let eig = a.hermitian_part().0.symmetric_eigen();
    let scale = a.max_abs().max(1e-300);
    let mut cols: Vec<(f64, usize, Vec<C64>)> = (0..n)
        .map(|k| {
            let mut v: Vec<C64> = eig.eigenvectors.column(k).iter().copied().collect();
            let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v.iter_mut().for_each(|z| *z /= norm);
            let lead = v.iter().position(|z| z.norm() > 1e-8).unwrap_or(0);
            let phase = v[lead].conj() / v[lead].norm();
            v.iter_mut().for_each(|z| *z *= phase);
            v[lead] = C64::new(v[lead].re, 0.0);
            (eig.eigenvalues[k], lead, v)
        })
        .collect();
    let tie = 1e-12 * scale;
    cols.sort_by(|x, y| if (x.0 - y.0).abs() <= tie { x.1.cmp(&y.1) } else { x.0.total_cmp(&y.0) });
    let eigenvalues = cols.iter().map(|c| c.0).collect();
    let vecs = DMatrix::from_fn(n, n, |row, col| cols[col].2[row]);
    Ok(Spectrum { eigenvalues, eigenvectors: ComplexMatrix(vecs) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn kron_block_placement() {
        let ket0 = ComplexMatrix::from_diagonal(&[1.0, 0.0]);
        let b = ComplexMatrix::from_diagonal(&[0.7, 0.3]);
        let k = tensor_product(&ket0, &b);
        assert_eq!(k, ComplexMatrix::from_diagonal(&[0.7, 0.3, 0.0, 0.0]));
    }

    #[test]
    fn kron_of_mixed_qubits_is_mixed() {
        let half = ComplexMatrix::identity(2).scale(0.5);
        let k = tensor_product(&half, &half);
        assert!((&k - &ComplexMatrix::identity(4).scale(0.25)).max_abs() < 1e-15);
    }

    #[test]
    fn kron_dimensions_multiply() {
        let k = tensor_product(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3));
        assert_eq!(k.dim(), 6);
    }

    #[test]
    fn kron_leftmost_slowest() {
        // a = [[1,2],[3,4]], b = I2: entry (row 2, col 0) is a[1][0] * b[0][0].
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        let k = tensor_product(&a, &ComplexMatrix::identity(2));
        assert_eq!(k.get(2, 0), c(3.0, 0.0));
        assert_eq!(k.get(0, 2), c(2.0, 0.0));
        assert_eq!(k.get(0, 1), c(0.0, 0.0));
    }

    #[test]
    fn spectrum_of_diagonal() {
        let s = hermitian_spectrum(&ComplexMatrix::from_diagonal(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 2.0, 3.0]);
        assert_eq!(s.eigenvectors.get(1, 0), c(1.0, 0.0));
    }

    #[test]
    fn spectrum_of_pauli_x() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let s = hermitian_spectrum(&x).unwrap();
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] - 1.0).abs() < 1e-14);
        assert!((&s.reconstruct() - &x).max_abs() < 1e-12);
    }

    #[test]
    fn spectrum_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(hermitian_spectrum(&m), Err(Error::Validation(_))));
    }

    #[test]
    fn spectrum_phase_fixed_and_unitary() {
        let m = ComplexMatrix::from_row_major(
            3,
            &[
                c(1.0, 0.0),
                c(0.3, 0.2),
                c(0.0, -0.5),
                c(0.3, -0.2),
                c(2.0, 0.0),
                c(0.1, 0.0),
                c(0.0, 0.5),
                c(0.1, 0.0),
                c(-1.0, 0.0),
            ],
        )
        .unwrap();
        let s = hermitian_spectrum(&m).unwrap();
        assert!((&s.reconstruct() - &m).max_abs() < 1e-12);
        let v = &s.eigenvectors;
        assert!((&(&v.adjoint() * v) - &ComplexMatrix::identity(3)).max_abs() < 1e-12);
        for k in 0..3 {
            let col = s.eigenvector(k);
            let lead = col.iter().find(|z| z.norm() > 1e-8).unwrap();
            assert!(lead.re > 0.0 && lead.im == 0.0);
        }
        assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn row_major_round_trip() {
        let entries = [c(1.0, 0.0), c(2.0, 1.0), c(3.0, -1.0), c(4.0, 0.0)];
        let m = ComplexMatrix::from_row_major(2, &entries).unwrap();
        assert_eq!(m.get(0, 1), c(2.0, 1.0));
        assert_eq!(m.to_row_major(), entries.to_vec());
        assert!(ComplexMatrix::from_row_major(2, &entries[..3]).is_err());
    }

    #[test]
    fn trace_norm_of_difference() {
        let a = ComplexMatrix::from_diagonal(&[1.0, 0.0]);
        let b = ComplexMatrix::from_diagonal(&[0.0, 1.0]);
        assert!(((&a - &b).trace_norm() - 2.0).abs() < 1e-14);
    }
}
