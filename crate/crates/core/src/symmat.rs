//! Dense symmetric matrices: spectra, PSD and nullity decisions, kernel
//! representations, Schur complements and weighted Laplacians.
//!
//! Every numerical decision is made relative to a scale (the spectral radius,
//! or 1 for the zero matrix). An eigenvalue with `|λ| <= tol * scale` counts as
//! zero; one with `tol * scale < |λ| <= 10 * tol * scale` sits in the gap and
//! makes the decision indeterminate.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multigraph::Multigraph;

pub const DEFAULT_TOL: f64 = 1e-8;

/// Width of the spectral gap, as a multiple of the tolerance.
pub const GAP_FACTOR: f64 = 10.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct SymMatrix(DMatrix<f64>);

impl TryFrom<Vec<Vec<f64>>> for SymMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        SymMatrix::from_rows(&rows)
    }
}

impl From<SymMatrix> for Vec<Vec<f64>> {
    fn from(m: SymMatrix) -> Self {
        m.0.row_iter().map(|r| r.iter().copied().collect()).collect()
    }
}

impl SymMatrix {
    /// Accepts a square matrix whose asymmetry is at most `1e-12` of its norm
    /// and stores its symmetric part.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!("{}x{} is not square", m.nrows(), m.ncols())));
        }
        let asym = (&m - m.transpose()).amax();
        if asym > 1e-12 * m.norm().max(f64::MIN_POSITIVE) {
            return Err(Error::Precondition(format!("matrix is not symmetric ({asym:e})")));
        }
        Ok(SymMatrix((&m + m.transpose()) * 0.5))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("rows of unequal length".into()));
        }
        SymMatrix::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn zeros(n: usize) -> Self {
        SymMatrix(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        SymMatrix(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        SymMatrix(DMatrix::from_diagonal(&DVector::from_column_slice(d)))
    }

    /// Rank-one matrix `a aᵀ`.
    pub fn outer(a: &DVector<f64>) -> Self {
        SymMatrix(a * a.transpose())
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        SymMatrix(&self.0 + &other.0)
    }

    pub fn scale(&self, c: f64) -> SymMatrix {
        SymMatrix(&self.0 * c)
    }

    /// `Cᵀ M C`.
    pub fn congruence(&self, c: &DMatrix<f64>) -> Result<SymMatrix> {
        if c.nrows() != self.n() {
            return Err(Error::Dimension("congruence factor has wrong row count".into()));
        }
        let m = c.transpose() * &self.0 * c;
        Ok(SymMatrix((&m + m.transpose()) * 0.5))
    }

    pub fn spectrum(&self) -> SpectralSummary {
        SpectralSummary::of(self)
    }

    pub fn psd_nullity(&self, tol: f64) -> PsdNullity {
        self.spectrum().psd_nullity(tol)
    }

    pub fn inertia(&self, tol: f64) -> Inertia {
        self.spectrum().inertia(tol)
    }
}

/// Eigen-decomposition with eigenvalues in ascending order.
#[derive(Clone, Debug)]
pub struct SpectralSummary {
    pub eigenvalues: DVector<f64>,
    /// Orthonormal eigenvectors as columns, matching `eigenvalues`.
    pub eigenvectors: DMatrix<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsdNullity {
    pub psd: bool,
    pub nullity: usize,
    pub min_eig: f64,
    /// False when some eigenvalue falls in the gap between "zero" and "nonzero".
    pub determinate: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl SpectralSummary {
    pub fn of(m: &SymMatrix) -> Self {
        let n = m.n();
        if n == 0 {
            return SpectralSummary { eigenvalues: DVector::zeros(0), eigenvectors: DMatrix::zeros(0, 0) };
        }
        let eig = m.0.clone().symmetric_eigen();
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let eigenvalues = DVector::from_iterator(n, idx.iter().map(|&i| eig.eigenvalues[i]));
        let eigenvectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, idx[c])]);
        SpectralSummary { eigenvalues, eigenvectors }
    }

    /// Spectral radius, or 1 for the zero matrix.
    pub fn scale(&self) -> f64 {
        let r = self.eigenvalues.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
        if r > 0.0 {
            r
        } else {
            1.0
        }
    }

    pub fn psd_nullity(&self, tol: f64) -> PsdNullity {
        let s = self.scale();
        let zero = tol * s;
        let gap = GAP_FACTOR * zero;
        let nullity = self.eigenvalues.iter().filter(|x| x.abs() <= zero).count();
        let determinate = !self.eigenvalues.iter().any(|x| x.abs() > zero && x.abs() <= gap);
        let min_eig = self.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        PsdNullity {
            psd: self.eigenvalues.is_empty() || min_eig >= -zero,
            nullity,
            min_eig: if self.eigenvalues.is_empty() { 0.0 } else { min_eig },
            determinate,
        }
    }

    pub fn inertia(&self, tol: f64) -> Inertia {
        let zero = tol * self.scale();
        let mut out = Inertia { positive: 0, negative: 0, zero: 0 };
        for &x in self.eigenvalues.iter() {
            if x > zero {
                out.positive += 1;
            } else if x < -zero {
                out.negative += 1;
            } else {
                out.zero += 1;
            }
        }
        out
    }

    /// Columns spanning the numerical kernel.
    pub fn kernel_basis(&self, tol: f64) -> DMatrix<f64> {
        let zero = tol * self.scale();
        let cols: Vec<usize> =
            (0..self.eigenvalues.len()).filter(|&i| self.eigenvalues[i].abs() <= zero).collect();
        self.eigenvectors.select_columns(&cols)
    }

    /// `‖M - V Λ Vᵀ‖` for checking the decomposition.
    pub fn reconstruction_residual(&self, m: &SymMatrix) -> f64 {
        let l = DMatrix::from_diagonal(&self.eigenvalues);
        (m.matrix() - &self.eigenvectors * l * self.eigenvectors.transpose()).norm()
    }
}

/// Rows spanning a kernel; when `reduced`, the all-one direction is removed
/// and the rows are read as a point configuration centred at the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelRepresentation {
    pub p: DMatrix<f64>,
    pub reduced: bool,
}

pub fn psd_nullity(m: &SymMatrix, tol: f64) -> PsdNullity {
    m.psd_nullity(tol)
}

pub fn kernel_representation(m: &SymMatrix, tol: f64, reduced: bool) -> Result<KernelRepresentation> {
    let spec = m.spectrum();
    let k = spec.kernel_basis(tol);
    if !reduced {
        return Ok(KernelRepresentation { p: k.transpose(), reduced });
    }
    let n = m.n();
    let ones = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let res = (m.matrix() * &ones).norm();
    if n == 0 || res > tol * spec.scale() {
        return Err(Error::OnesNotInKernel(res));
    }
    let proj = &k - &ones * (ones.transpose() * &k);
    let rows = orthonormal_columns(&proj, 0.5).transpose();
    Ok(KernelRepresentation { p: rows, reduced })
}

/// Orthonormal basis of the column space, keeping singular values above `cut`
/// times the largest one (absolute `cut` if all are below 1).
pub fn orthonormal_columns(a: &DMatrix<f64>, cut: f64) -> DMatrix<f64> {
    if a.ncols() == 0 || a.nrows() == 0 {
        return DMatrix::zeros(a.nrows(), 0);
    }
    let svd = a.clone().svd(true, false);
    let u = svd.u.unwrap();
    let smax = svd.singular_values.max().max(1.0);
    let keep: Vec<usize> =
        (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] > cut * smax).collect();
    u.select_columns(&keep)
}

/// Basis of `{x : A x = 0}` as columns, treating singular values at most
/// `tol * σ_max` as zero.
pub fn null_space(a: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let (r, c) = a.shape();
    if c == 0 {
        return DMatrix::zeros(0, 0);
    }
    let padded = if r < c {
        let mut p = DMatrix::zeros(c, c);
        p.view_mut((0, 0), (r, c)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.unwrap();
    let smax = svd.singular_values.max();
    let thresh = if smax > 0.0 { tol * smax } else { 0.0 };
    let keep: Vec<usize> =
        (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] <= thresh).collect();
    vt.select_rows(&keep).transpose()
}

/// Numerical rank with relative threshold `tol * σ_max`.
pub fn rank(a: &DMatrix<f64>, tol: f64) -> usize {
    if a.is_empty() {
        return 0;
    }
    let s = a.clone().singular_values();
    let smax = s.max();
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > tol * smax).count()
}

/// Singular values in decreasing order.
pub fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

fn without_index(n: usize, i: usize) -> Vec<usize> {
    (0..n).filter(|&k| k != i).collect()
}

/// `M / i = T - s sᵀ / r` where `r = M[i,i]`, `s` is the rest of column `i`
/// and `T` is `M` with row and column `i` removed.
pub fn schur_complement(m: &SymMatrix, i: usize, tol: f64) -> Result<SymMatrix> {
    let n = m.n();
    if i >= n {
        return Err(Error::Dimension(format!("index {i} out of range {n}")));
    }
    let r = m.get(i, i);
    if r.abs() <= tol * m.norm() || r == 0.0 {
        return Err(Error::ZeroPivot { index: i, pivot: r });
    }
    let rest = without_index(n, i);
    let t = m.matrix().select_rows(&rest).select_columns(&rest);
    let s = m.matrix().column(i).select_rows(&rest);
    let out = t - &s * s.transpose() / r;
    Ok(SymMatrix((&out + out.transpose()) * 0.5))
}

/// Extend a kernel matrix `P'` (rows, `n-1` columns) of `M / i` to a kernel
/// matrix of `M` by inserting column `i` equal to `-(1/r) P' s`.
pub fn kernel_extend(m: &SymMatrix, i: usize, p_prime: &DMatrix<f64>, tol: f64) -> Result<KernelRepresentation> {
    let n = m.n();
    if i >= n || p_prime.ncols() + 1 != n {
        return Err(Error::Dimension("kernel matrix does not match the Schur complement".into()));
    }
    let r = m.get(i, i);
    if r.abs() <= tol * m.norm() || r == 0.0 {
        return Err(Error::ZeroPivot { index: i, pivot: r });
    }
    let rest = without_index(n, i);
    let s = m.matrix().column(i).select_rows(&rest);
    let col = -(p_prime * s) / r;
    let k = p_prime.nrows();
    let mut p = DMatrix::zeros(k, n);
    for (new_j, &old) in rest.iter().enumerate() {
        p.set_column(old, &p_prime.column(new_j));
    }
    p.set_column(i, &col);
    Ok(KernelRepresentation { p, reduced: false })
}

/// `F_ij`: the Laplacian of a single unit edge `ij` on `n` vertices.
pub fn edge_matrix(n: usize, i: usize, j: usize) -> SymMatrix {
    let mut m = DMatrix::zeros(n, n);
    m[(i, i)] = 1.0;
    m[(j, j)] = 1.0;
    m[(i, j)] = -1.0;
    m[(j, i)] = -1.0;
    SymMatrix(m)
}

/// `L = Σ ω(e) F_e`, assembled entry by entry.
pub fn assemble_laplacian(g: &Multigraph, omega: &[f64]) -> Result<SymMatrix> {
    if omega.len() != g.edge_count() {
        return Err(Error::StressLength { expected: g.edge_count(), got: omega.len() });
    }
    let mut m = DMatrix::zeros(g.n(), g.n());
    for (&(u, v), &w) in g.edges().iter().zip(omega) {
        m[(u, u)] += w;
        m[(v, v)] += w;
        m[(u, v)] -= w;
        m[(v, u)] -= w;
    }
    Ok(SymMatrix(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_asymmetric_and_nonsquare() {
        assert!(SymMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).is_err());
        assert!(SymMatrix::new(DMatrix::zeros(2, 3)).is_err());
        let m = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0 + 1e-15, 1.0]]).unwrap();
        assert_eq!(m.get(0, 1), m.get(1, 0));
    }

    #[test]
    fn psd_nullity_basic() {
        let i3 = psd_nullity(&SymMatrix::identity(3), DEFAULT_TOL);
        assert!(i3.psd && i3.nullity == 0 && (i3.min_eig - 1.0).abs() < 1e-15);
        let z = psd_nullity(&SymMatrix::zeros(4), DEFAULT_TOL);
        assert!(z.psd && z.nullity == 4 && z.determinate);
        let d = psd_nullity(&SymMatrix::from_diagonal(&[1.0, -1.0]), DEFAULT_TOL);
        assert!(!d.psd);
    }

    #[test]
    fn gap_is_indeterminate() {
        let m = SymMatrix::from_diagonal(&[1.0, 5e-8, 0.0]);
        let pn = psd_nullity(&m, 1e-8);
        assert!(!pn.determinate);
        let m = SymMatrix::from_diagonal(&[1.0, 5e-6, 0.0]);
        assert!(psd_nullity(&m, 1e-8).determinate);
    }

    #[test]
    fn spectrum_invariants() {
        let m = SymMatrix::from_rows(&[
            vec![2.0, -1.0, 0.0],
            vec![-1.0, 2.0, -1.0],
            vec![0.0, -1.0, 2.0],
        ])
        .unwrap();
        let s = m.spectrum();
        assert!(s.reconstruction_residual(&m) < 1e-12 * m.norm());
        let vtv = s.eigenvectors.transpose() * &s.eigenvectors;
        assert!((vtv - DMatrix::identity(3, 3)).amax() < 1e-12);
        assert!(s.eigenvalues[0] <= s.eigenvalues[1] && s.eigenvalues[1] <= s.eigenvalues[2]);
    }

    #[test]
    fn reduced_kernel_of_rank_one_laplacian() {
        let a = DVector::from_vec(vec![1.0, -1.0, 1.0, -1.0]);
        let l = SymMatrix::outer(&a);
        let kr = kernel_representation(&l, DEFAULT_TOL, true).unwrap();
        assert_eq!(kr.p.shape(), (2, 4));
        assert!((l.matrix() * kr.p.transpose()).amax() < 1e-12);
        for r in 0..2 {
            assert!(kr.p.row(r).sum().abs() < 1e-12);
        }
        let pn = psd_nullity(&l, DEFAULT_TOL);
        assert_eq!(pn.nullity, 3);
    }

    #[test]
    fn reduced_kernel_of_zero() {
        let kr = kernel_representation(&SymMatrix::zeros(4), DEFAULT_TOL, true).unwrap();
        assert_eq!(kr.p.shape(), (3, 4));
        let g = kr.p.transpose() * &kr.p;
        // Points form a regular simplex: all pairwise distances equal.
        let d01 = g[(0, 0)] + g[(1, 1)] - 2.0 * g[(0, 1)];
        let d23 = g[(2, 2)] + g[(3, 3)] - 2.0 * g[(2, 3)];
        assert!((d01 - d23).abs() < 1e-12 && d01 > 0.1);
    }

    #[test]
    fn reduced_kernel_requires_ones() {
        let e = kernel_representation(&SymMatrix::identity(3), DEFAULT_TOL, true);
        assert!(matches!(e, Err(Error::OnesNotInKernel(_))));
    }

    #[test]
    fn schur_examples() {
        let m = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let s = schur_complement(&m, 0, DEFAULT_TOL).unwrap();
        assert!((s.get(0, 0) - 1.5).abs() < 1e-15);
        let z = SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 2.0]]).unwrap();
        assert!(matches!(schur_complement(&z, 0, DEFAULT_TOL), Err(Error::ZeroPivot { .. })));
    }

    #[test]
    fn kernel_extend_examples() {
        let m = SymMatrix::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        let s = schur_complement(&m, 0, DEFAULT_TOL).unwrap();
        assert!(s.get(0, 0).abs() < 1e-15);
        let p = kernel_extend(&m, 0, &DMatrix::from_element(1, 1, 1.0), DEFAULT_TOL).unwrap();
        assert_eq!(p.p, DMatrix::from_row_slice(1, 2, &[1.0, 1.0]));
        let empty = kernel_extend(&m, 0, &DMatrix::zeros(0, 1), DEFAULT_TOL).unwrap();
        assert_eq!(empty.p.nrows(), 0);
    }

    #[test]
    fn laplacian_examples() {
        let l = assemble_laplacian(&Multigraph::path(2), &[1.0]).unwrap();
        assert_eq!(l, SymMatrix::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap());
        let l = assemble_laplacian(&Multigraph::theta(2), &[0.7, -0.7]).unwrap();
        assert_eq!(l.matrix().amax(), 0.0);
        let l = assemble_laplacian(&Multigraph::cycle(4), &[3.0, 3.0, 3.0, -1.0]).unwrap();
        let pn = psd_nullity(&l, DEFAULT_TOL);
        assert!(pn.psd && pn.nullity == 2);
        assert!(assemble_laplacian(&Multigraph::path(3), &[1.0]).is_err());
    }

    #[test]
    fn null_space_and_rank() {
        let a = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let ns = null_space(&a, 1e-10);
        assert_eq!(ns.ncols(), 2);
        assert!((&a * &ns).amax() < 1e-12);
        assert_eq!(rank(&a, 1e-10), 1);
        assert_eq!(rank(&DMatrix::zeros(2, 2), 1e-10), 0);
    }
}
