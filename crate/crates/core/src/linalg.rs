//! Dense complex matrices and the handful of operations the rest of the crate
//! needs: Kronecker products, partial traces and transposes over qubit/qudit
//! registers, and Hermitian spectral calculus.
//!
//! Basis convention for a qubit is `(|0>, |1>)` with `sigma_z = diag(-1, +1)`,
//! so `sigma_z |1> = +|1>`. Multi-party tensor order is left to right, most
//! significant index first.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Global Hermiticity tolerance used by every spectral call.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues below `-SQRT_CLAMP_TOL` make a square root undefined.
pub const SQRT_CLAMP_TOL: f64 = 1e-10;

pub type C64 = Complex64;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix(DMatrix<C64>);

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        CMatrix(DMatrix::identity(n, n))
    }

    /// Builds a matrix from entries given in row-major order.
    pub fn from_row_slice(rows: usize, cols: usize, entries: &[C64]) -> Self {
        assert_eq!(rows * cols, entries.len(), "entry count must equal rows*cols");
        CMatrix(DMatrix::from_row_slice(rows, cols, entries))
    }

    pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> Self {
        let v: Vec<C64> = entries.iter().map(|&x| re(x)).collect();
        Self::from_row_slice(rows, cols, &v)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        CMatrix(DMatrix::from_fn(rows, cols, |i, j| f(i, j)))
    }

    pub fn diag(values: &[C64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i] } else { C64::new(0.0, 0.0) })
    }

    pub fn real_diag(values: &[f64]) -> Self {
        let v: Vec<C64> = values.iter().map(|&x| re(x)).collect();
        Self::diag(&v)
    }

    /// Column vector from amplitudes.
    pub fn ket(amplitudes: &[C64]) -> Self {
        CMatrix(DMatrix::from_column_slice(amplitudes.len(), 1, amplitudes))
    }

    /// Computational basis ket `|index>` in dimension `dim`.
    pub fn basis_ket(dim: usize, index: usize) -> Self {
        let mut k = Self::zeros(dim, 1);
        k[(index, 0)] = re(1.0);
        k
    }

    /// `|a><b|` for column vectors `a`, `b`.
    pub fn outer(a: &CMatrix, b: &CMatrix) -> Self {
        a * &b.adjoint()
    }

    /// Projector `|psi><psi|`.
    pub fn projector(psi: &CMatrix) -> Self {
        Self::outer(psi, psi)
    }

    pub fn from_nalgebra(m: DMatrix<C64>) -> Self {
        CMatrix(m)
    }

    pub fn as_nalgebra(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_nalgebra(self) -> DMatrix<C64> {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<C64> {
        let (r, cl) = self.shape();
        let mut out = Vec::with_capacity(r * cl);
        for i in 0..r {
            for j in 0..cl {
                out.push(self[(i, j)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        CMatrix(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        CMatrix(self.0.transpose())
    }

    pub fn conj(&self) -> Self {
        CMatrix(self.0.map(|z| z.conj()))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn scale(&self, s: C64) -> Self {
        CMatrix(&self.0 * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(re(s))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |self - other|` entrywise. Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in max_abs_diff");
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |M - M^dag|`; infinite for non-square input.
    pub fn hermiticity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() < tol
    }

    /// `(M + M^dag) / 2`.
    pub fn symmetrized(&self) -> Self {
        CMatrix((&self.0 + self.0.adjoint()) * re(0.5))
    }

    /// `tr[self * other]` without forming the product.
    pub fn trace_product(&self, other: &CMatrix) -> C64 {
        assert_eq!(self.cols(), other.rows());
        assert_eq!(self.rows(), other.cols());
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..self.rows() {
            for k in 0..self.cols() {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    /// `A^dag A` summed over a Kraus list would use this often enough.
    pub fn gram(&self) -> Self {
        CMatrix(self.0.adjoint() * &self.0)
    }

    /// Similarity `U M U^dag`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Self {
        CMatrix(&u.0 * &self.0 * u.0.adjoint())
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            write!(f, "  ")?;
            for j in 0..self.cols() {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut C64 {
        &mut self.0[idx]
    }
}

impl<'a> Add<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &'a CMatrix) -> CMatrix {
        CMatrix(&self.0 + &rhs.0)
    }
}

impl Add for CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: CMatrix) -> CMatrix {
        CMatrix(self.0 + rhs.0)
    }
}

impl AddAssign<&CMatrix> for CMatrix {
    fn add_assign(&mut self, rhs: &CMatrix) {
        self.0 += &rhs.0;
    }
}

impl<'a> Sub<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &'a CMatrix) -> CMatrix {
        CMatrix(&self.0 - &rhs.0)
    }
}

impl Sub for CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: CMatrix) -> CMatrix {
        CMatrix(self.0 - rhs.0)
    }
}

impl<'a> Mul<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &'a CMatrix) -> CMatrix {
        CMatrix(&self.0 * &rhs.0)
    }
}

impl Mul for CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: CMatrix) -> CMatrix {
        CMatrix(self.0 * rhs.0)
    }
}

impl Neg for CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        CMatrix(-self.0)
    }
}

/// Single-qubit operators in the fixed basis convention.
pub mod pauli {
    use super::{c, re, CMatrix};

    pub fn identity() -> CMatrix {
        CMatrix::identity(2)
    }

    pub fn x() -> CMatrix {
        CMatrix::from_real_rows(2, 2, &[0.0, 1.0, 1.0, 0.0])
    }

    /// `[[0, i], [-i, 0]]`, so that `x * y = i z` with `z = diag(-1, 1)`.
    pub fn y() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[re(0.0), c(0.0, 1.0), c(0.0, -1.0), re(0.0)])
    }

    pub fn z() -> CMatrix {
        CMatrix::real_diag(&[-1.0, 1.0])
    }

    /// `|1><0|`.
    pub fn plus() -> CMatrix {
        CMatrix::from_real_rows(2, 2, &[0.0, 0.0, 1.0, 0.0])
    }

    /// `|0><1|`.
    pub fn minus() -> CMatrix {
        CMatrix::from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0])
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    CMatrix(a.0.kronecker(&b.0))
}

/// Kronecker product of a list, left to right.
pub fn kron_all(factors: &[&CMatrix]) -> CMatrix {
    let mut out = CMatrix::identity(1);
    for f in factors {
        out = kron(&out, f);
    }
    out
}

fn check_register(m: &CMatrix, dims: &[usize], indices: &[usize]) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let total: usize = dims.iter().product();
    if total != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dimensions {:?} multiply to {} but matrix is {}x{}",
            dims,
            total,
            m.rows(),
            m.cols()
        )));
    }
    if let Some(&bad) = indices.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::DimensionMismatch(format!(
            "subsystem index {bad} out of range for {} subsystems",
            dims.len()
        )));
    }
    Ok(())
}

/// Splits a flat index into per-subsystem digits (most significant first).
fn digits(mut idx: usize, dims: &[usize], out: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
}

fn flatten(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&d, &n)| acc * n + d)
}

/// Reduced operator on the subsystems in `keep` (in ascending subsystem order).
pub fn partial_trace(m: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    check_register(m, dims, keep)?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let kept_dims: Vec<usize> = kept.iter().map(|&k| dims[k]).collect();
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !kept.contains(k)).collect();
    let out_dim: usize = kept_dims.iter().product();

    let n = m.rows();
    let mut out = CMatrix::zeros(out_dim, out_dim);
    let mut di = vec![0; dims.len()];
    let mut dj = vec![0; dims.len()];
    let mut ki = vec![0; kept.len()];
    let mut kj = vec![0; kept.len()];
    for i in 0..n {
        digits(i, dims, &mut di);
        for j in 0..n {
            digits(j, dims, &mut dj);
            if traced.iter().any(|&t| di[t] != dj[t]) {
                continue;
            }
            for (slot, &k) in kept.iter().enumerate() {
                ki[slot] = di[k];
                kj[slot] = dj[k];
            }
            let a = flatten(&ki, &kept_dims);
            let b = flatten(&kj, &kept_dims);
            out[(a, b)] += m[(i, j)];
        }
    }
    Ok(out)
}

/// Transpose on the listed subsystems only.
pub fn partial_transpose(m: &CMatrix, dims: &[usize], subsystems: &[usize]) -> Result<CMatrix> {
    check_register(m, dims, subsystems)?;
    let n = m.rows();
    let mut out = CMatrix::zeros(n, n);
    let mut di = vec![0; dims.len()];
    let mut dj = vec![0; dims.len()];
    for i in 0..n {
        for j in 0..n {
            digits(i, dims, &mut di);
            digits(j, dims, &mut dj);
            for &s in subsystems {
                std::mem::swap(&mut di[s], &mut dj[s]);
            }
            out[(flatten(&di, dims), flatten(&dj, dims))] = m[(i, j)];
        }
    }
    Ok(out)
}

/// Reorders tensor factors: factor `k` of the input lands in slot `perm[k]`.
pub fn permute_subsystems(m: &CMatrix, dims: &[usize], perm: &[usize]) -> Result<CMatrix> {
    check_register(m, dims, perm)?;
    let mut seen = vec![false; dims.len()];
    for &p in perm {
        seen[p] = true;
    }
    if perm.len() != dims.len() || seen.iter().any(|s| !s) {
        return Err(Error::DimensionMismatch(format!("{perm:?} is not a permutation")));
    }
    let mut new_dims = vec![0; dims.len()];
    for (k, &p) in perm.iter().enumerate() {
        new_dims[p] = dims[k];
    }
    let n = m.rows();
    let mut out = CMatrix::zeros(n, n);
    let mut di = vec![0; dims.len()];
    let mut dj = vec![0; dims.len()];
    let mut pi = vec![0; dims.len()];
    let mut pj = vec![0; dims.len()];
    for i in 0..n {
        digits(i, dims, &mut di);
        for (k, &p) in perm.iter().enumerate() {
            pi[p] = di[k];
        }
        let a = flatten(&pi, &new_dims);
        for j in 0..n {
            digits(j, dims, &mut dj);
            for (k, &p) in perm.iter().enumerate() {
                pj[p] = dj[k];
            }
            out[(a, flatten(&pj, &new_dims))] = m[(i, j)];
        }
    }
    Ok(out)
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermEig {
    /// Sorted descending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: CMatrix,
}

impl HermEig {
    pub fn reconstruct(&self) -> CMatrix {
        let lam: Vec<C64> = self.values.iter().map(|&v| re(v)).collect();
        &(&self.vectors * &CMatrix::diag(&lam)) * &self.vectors.adjoint()
    }

    pub fn min(&self) -> f64 {
        *self.values.last().expect("empty spectrum")
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }
}

/// Hermitian eigendecomposition with eigenvalues sorted descending.
pub fn herm_eig(m: &CMatrix) -> Result<HermEig> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let residual = m.hermiticity_residual();
    if residual >= HERMITIAN_TOL {
        return Err(Error::NotHermitian { residual });
    }
    Ok(herm_eig_unchecked(m))
}

/// As [`herm_eig`], but symmetrizes without checking the input first.
pub(crate) fn herm_eig_unchecked(m: &CMatrix) -> HermEig {
    let eig = SymmetricEigen::new(m.symmetrized().0);
    let n = m.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    HermEig { values, vectors }
}

pub fn eigvalsh(m: &CMatrix) -> Result<Vec<f64>> {
    herm_eig(m).map(|e| e.values)
}

pub fn min_eigenvalue(m: &CMatrix) -> Result<f64> {
    herm_eig(m).map(|e| e.min())
}

/// Applies `f` to the spectrum of a Hermitian matrix.
pub fn func_herm(m: &CMatrix, f: impl Fn(f64) -> C64) -> Result<CMatrix> {
    let eig = herm_eig(m)?;
    let lam: Vec<C64> = eig.values.iter().map(|&v| f(v)).collect();
    Ok(&(&eig.vectors * &CMatrix::diag(&lam)) * &eig.vectors.adjoint())
}

/// Principal square root of a PSD matrix; eigenvalues in `[-1e-10, 0)` are clamped.
pub fn sqrt_psd(m: &CMatrix) -> Result<CMatrix> {
    let eig = herm_eig(m)?;
    if let Some(&bad) = eig.values.iter().find(|&&v| v < -SQRT_CLAMP_TOL) {
        return Err(Error::NegativeEigenvalue { value: bad });
    }
    let lam: Vec<C64> = eig.values.iter().map(|&v| re(v.max(0.0).sqrt())).collect();
    Ok(&(&eig.vectors * &CMatrix::diag(&lam)) * &eig.vectors.adjoint())
}

/// `exp(-i t H)` for Hermitian `H`.
pub fn expm_herm(h: &CMatrix, t: f64) -> Result<CMatrix> {
    func_herm(h, |lam| C64::from_polar(1.0, -lam * t))
}

/// Orthogonal projection of a Hermitian matrix onto the PSD cone.
pub fn project_psd(m: &CMatrix) -> CMatrix {
    let eig = herm_eig_unchecked(m);
    let n = m.rows();
    let mut out = CMatrix::zeros(n, n);
    for (k, &v) in eig.values.iter().enumerate() {
        if v <= 0.0 {
            break;
        }
        for i in 0..n {
            let vik = eig.vectors[(i, k)] * v;
            for j in 0..n {
                out[(i, j)] += vik * eig.vectors[(j, k)].conj();
            }
        }
    }
    out
}

/// Singular values, descending.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.0.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell_unnormalized() -> CMatrix {
        let phi = CMatrix::ket(&[re(1.0), re(0.0), re(0.0), re(1.0)]);
        CMatrix::projector(&phi)
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i4 = kron(&pauli::identity(), &pauli::identity());
        assert_eq!(i4, CMatrix::identity(4));
    }

    #[test]
    fn xx_fixes_left_left_state() {
        // |l> is the +1 eigenvector of sigma_x
        let l = CMatrix::ket(&[re(1.0 / 2f64.sqrt()), re(1.0 / 2f64.sqrt())]);
        let ll = kron(&l, &l);
        let xx = kron(&pauli::x(), &pauli::x());
        assert!((&xx * &ll).max_abs_diff(&ll) < 1e-15);
    }

    #[test]
    fn zz_diagonal_in_fixed_basis() {
        let zz = kron(&pauli::z(), &pauli::z());
        let d: Vec<f64> = (0..4).map(|k| zz[(k, k)].re).collect();
        assert_eq!(d, vec![1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn pauli_algebra_in_pinned_convention() {
        let xy = &pauli::x() * &pauli::y();
        assert!(xy.max_abs_diff(&pauli::z().scale(c(0.0, 1.0))) < 1e-15);
        let one = CMatrix::basis_ket(2, 1);
        assert!((&pauli::z() * &one).max_abs_diff(&one) < 1e-15);
        assert!((&pauli::plus() * &CMatrix::basis_ket(2, 0)).max_abs_diff(&one) < 1e-15);
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let rho = bell_unnormalized().scale_re(0.5);
        let red = partial_trace(&rho, &[2, 2], &[1]).unwrap();
        assert!(red.max_abs_diff(&CMatrix::identity(2).scale_re(0.5)) < 1e-15);
    }

    #[test]
    fn product_state_factorizes() {
        let rs = CMatrix::from_row_slice(2, 2, &[re(0.7), c(0.1, 0.2), c(0.1, -0.2), re(0.3)]);
        let rm = CMatrix::from_row_slice(2, 2, &[re(0.4), c(0.0, 0.3), c(0.0, -0.3), re(0.6)]);
        let joint = kron(&rs, &rm);
        let red0 = partial_trace(&joint, &[2, 2], &[0]).unwrap();
        let red1 = partial_trace(&joint, &[2, 2], &[1]).unwrap();
        assert!(red0.max_abs_diff(&rs) < 1e-15);
        assert!(red1.max_abs_diff(&rm) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_dims() {
        let m = CMatrix::identity(4);
        assert!(matches!(partial_trace(&m, &[2, 3], &[0]), Err(Error::DimensionMismatch(_))));
        assert!(matches!(partial_trace(&m, &[2, 2], &[2]), Err(Error::DimensionMismatch(_))));
        let rect = CMatrix::zeros(2, 4);
        assert!(partial_transpose(&rect, &[2, 2], &[0]).is_err());
    }

    #[test]
    fn bell_partial_transpose_is_swap() {
        let pt = partial_transpose(&bell_unnormalized(), &[2, 2], &[1]).unwrap();
        // explicit enumeration: SWAP|ab> = |ba>
        let mut swap = CMatrix::zeros(4, 4);
        for a in 0..2 {
            for b in 0..2 {
                swap[(b * 2 + a, a * 2 + b)] = re(1.0);
            }
        }
        assert_eq!(pt, swap);
    }

    #[test]
    fn full_partial_transpose_is_transpose() {
        let m = CMatrix::from_fn(4, 4, |i, j| c(i as f64 + 0.5 * j as f64, (i * j) as f64));
        let pt = partial_transpose(&m, &[2, 2], &[0, 1]).unwrap();
        assert_eq!(pt, m.transpose());
    }

    #[test]
    fn permute_moves_factors() {
        let a = pauli::x();
        let b = pauli::z();
        let cm = pauli::y();
        let abc = kron_all(&[&a, &b, &cm]);
        // factor 0 -> slot 2, 1 -> 0, 2 -> 1 gives b ⊗ c ⊗ a
        let moved = permute_subsystems(&abc, &[2, 2, 2], &[2, 0, 1]).unwrap();
        assert!(moved.max_abs_diff(&kron_all(&[&b, &cm, &a])) < 1e-15);
        assert!(permute_subsystems(&abc, &[2, 2, 2], &[0, 0, 1]).is_err());
    }

    #[test]
    fn spectra_of_simple_operators() {
        let ez = herm_eig(&pauli::z()).unwrap();
        assert!((ez.values[0] - 1.0).abs() < 1e-14 && (ez.values[1] + 1.0).abs() < 1e-14);
        let xx = kron(&pauli::x(), &pauli::x());
        let v = eigvalsh(&xx).unwrap();
        for (got, want) in v.iter().zip([1.0, 1.0, -1.0, -1.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn herm_eig_rejects_non_hermitian() {
        let m = CMatrix::from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(herm_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn exponential_of_xx_closed_form() {
        let xx = kron(&pauli::x(), &pauli::x());
        for t in [0.0, 0.3, 1.1, -2.0] {
            let u = func_herm(&xx, |th| C64::from_polar(1.0, -th * t)).unwrap();
            let want = &CMatrix::identity(4).scale_re(t.cos()) - &xx.scale(c(0.0, t.sin()));
            assert!(u.max_abs_diff(&want) < 1e-14);
        }
    }

    #[test]
    fn sqrt_of_identity_and_rejection() {
        assert!(sqrt_psd(&CMatrix::identity(3)).unwrap().max_abs_diff(&CMatrix::identity(3)) < 1e-14);
        let bad = CMatrix::real_diag(&[1.0, -1e-3]);
        assert!(matches!(sqrt_psd(&bad), Err(Error::NegativeEigenvalue { .. })));
        // tiny negatives are clamped
        let ok = CMatrix::real_diag(&[1.0, -1e-12]);
        assert!(sqrt_psd(&ok).is_ok());
    }

    #[test]
    fn psd_projection_clamps_negative_part() {
        let m = CMatrix::real_diag(&[2.0, -1.0, 0.5]);
        let p = project_psd(&m);
        assert!(p.max_abs_diff(&CMatrix::real_diag(&[2.0, 0.0, 0.5])) < 1e-14);
    }
}
