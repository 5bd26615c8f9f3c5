//! Dense complex matrices and the bipartite index transforms.
//!
//! Composite basis convention: `|i⟩ ⊗ |j⟩` on an `m ⊗ n` space has row index
//! `i * n + j`. Every transform here (partial trace, partial transpose,
//! realignment, the regrouped N-copy tensor power) follows it.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default cap on the side length of any matrix built by `kron` and friends.
pub const DEFAULT_DIM_CAP: usize = 4096;

/// Relative Hermiticity tolerance: `max |a - a^H| <= HERMITIAN_TOL * (1 + max |a|)`.
pub const HERMITIAN_TOL: f64 = 1e-8;

const SVD_MAX_ITER: usize = 10_000;
const EIG_MAX_ITER: usize = 10_000;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub(crate) fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Row-major dense complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from real and imaginary parts, both row-major.
    pub fn from_parts(rows: usize, cols: usize, re: &[f64], im: &[f64]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::Dimension(format!(
                "real part has {} entries, imaginary part {}",
                re.len(),
                im.len()
            )));
        }
        Self::new(rows, cols, re.iter().zip(im).map(|(&a, &b)| c(a, b)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::default(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            out[(i, i)] = cr(1.0);
        }
        out
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut out = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            out[(i, i)] = cr(d);
        }
        out
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for col in 0..cols {
                data.push(f(r, col));
            }
        }
        Self { rows, cols, data }
    }

    /// `|v⟩⟨v|`.
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.map(|z| z * factor)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise distance to another matrix of the same shape.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |a - a^H|` over all entries.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// `(a + a^H) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// Principal submatrix on the given (ordered) index list.
    pub fn principal_submatrix(&self, indices: &[usize]) -> Self {
        Self::from_fn(indices.len(), indices.len(), |a, b| self[(indices[a], indices[b])])
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (r, col): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.rows && col < self.cols);
        &self.data[r * self.cols + col]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, col): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.rows && col < self.cols);
        &mut self.data[r * self.cols + col]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::default() {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

/// Dimensions of a bipartite `m ⊗ n` space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BipartiteIndex {
    m: usize,
    n: usize,
}

impl BipartiteIndex {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m < 2 || n < 2 {
            return Err(Error::Dimension(format!(
                "local dimensions must be at least 2, got {m}x{n}"
            )));
        }
        Ok(Self { m, n })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Side length `m * n` of the operators on this space.
    pub fn dim(&self) -> usize {
        self.m * self.n
    }

    #[inline]
    pub fn composite(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }

    /// Index with the two subsystems exchanged.
    pub fn swapped(&self) -> Self {
        Self { m: self.n, n: self.m }
    }

    pub fn check(&self, a: &ComplexMatrix) -> Result<()> {
        if a.rows() != self.dim() || a.cols() != self.dim() {
            return Err(Error::Dimension(format!(
                "expected a {d}x{d} matrix for {m}⊗{n}, got {r}x{c}",
                d = self.dim(),
                m = self.m,
                n = self.n,
                r = a.rows(),
                c = a.cols()
            )));
        }
        Ok(())
    }
}

/// Which subsystem a partial operation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    kron_capped(a, b, DEFAULT_DIM_CAP)
}

pub fn kron_capped(a: &ComplexMatrix, b: &ComplexMatrix, cap: usize) -> Result<ComplexMatrix> {
    let rows = checked_dim(a.rows(), b.rows(), cap)?;
    let cols = checked_dim(a.cols(), b.cols(), cap)?;
    let (br, bc) = (b.rows(), b.cols());
    Ok(ComplexMatrix::from_fn(rows, cols, |r, col| {
        a[(r / br, col / bc)] * b[(r % br, col % bc)]
    }))
}

fn checked_dim(x: usize, y: usize, cap: usize) -> Result<usize> {
    match x.checked_mul(y) {
        Some(d) if d <= cap => Ok(d),
        Some(d) => Err(Error::SizeLimit { dim: d, cap }),
        None => Err(Error::SizeLimit { dim: usize::MAX, cap }),
    }
}

/// Tensor product of two bipartite operators, regrouped as
/// `(m1 m2) ⊗ (n1 n2)` with the first factor's local index most significant.
pub fn bipartite_kron(
    a: &ComplexMatrix,
    ia: BipartiteIndex,
    b: &ComplexMatrix,
    ib: BipartiteIndex,
    cap: usize,
) -> Result<(ComplexMatrix, BipartiteIndex)> {
    ia.check(a)?;
    ib.check(b)?;
    let m = checked_dim(ia.m, ib.m, cap)?;
    let n = checked_dim(ia.n, ib.n, cap)?;
    let dim = checked_dim(m, n, cap)?;
    let idx = BipartiteIndex { m, n };
    let mut out = ComplexMatrix::zeros(dim, dim);
    for i1 in 0..ia.m {
        for j1 in 0..ia.n {
            for k1 in 0..ia.m {
                for l1 in 0..ia.n {
                    let x = a[(ia.composite(i1, j1), ia.composite(k1, l1))];
                    if x == Complex64::default() {
                        continue;
                    }
                    for i2 in 0..ib.m {
                        for j2 in 0..ib.n {
                            let row = idx.composite(i1 * ib.m + i2, j1 * ib.n + j2);
                            for k2 in 0..ib.m {
                                for l2 in 0..ib.n {
                                    let col = idx.composite(k1 * ib.m + k2, l1 * ib.n + l2);
                                    out[(row, col)] =
                                        x * b[(ib.composite(i2, j2), ib.composite(k2, l2))];
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok((out, idx))
}

/// Traces out `side`: returns `tr_B ρ` (m×m) for `Side::B`, `tr_A ρ` (n×n) for `Side::A`.
pub fn partial_trace(rho: &ComplexMatrix, idx: BipartiteIndex, side: Side) -> Result<ComplexMatrix> {
    idx.check(rho)?;
    let (m, n) = (idx.m, idx.n);
    Ok(match side {
        Side::B => ComplexMatrix::from_fn(m, m, |i, k| {
            (0..n).map(|j| rho[(idx.composite(i, j), idx.composite(k, j))]).sum()
        }),
        Side::A => ComplexMatrix::from_fn(n, n, |j, l| {
            (0..m).map(|i| rho[(idx.composite(i, j), idx.composite(i, l))]).sum()
        }),
    })
}

/// `ρ^{T_A}`: entry `((i,j),(k,l))` of the output is entry `((k,j),(i,l))` of the input.
pub fn partial_transpose_a(rho: &ComplexMatrix, idx: BipartiteIndex) -> Result<ComplexMatrix> {
    idx.check(rho)?;
    let n = idx.n;
    Ok(ComplexMatrix::from_fn(rho.rows(), rho.cols(), |r, col| {
        let (i, j) = (r / n, r % n);
        let (k, l) = (col / n, col % n);
        rho[(idx.composite(k, j), idx.composite(i, l))]
    }))
}

/// Realignment: the `m² × n²` matrix with `R[(i·m+k, j·n+l)] = ρ[((i,j),(k,l))]`.
pub fn realign(rho: &ComplexMatrix, idx: BipartiteIndex) -> Result<ComplexMatrix> {
    idx.check(rho)?;
    let (m, n) = (idx.m, idx.n);
    Ok(ComplexMatrix::from_fn(m * m, n * n, |r, col| {
        let (i, k) = (r / m, r % m);
        let (j, l) = (col / n, col % n);
        rho[(idx.composite(i, j), idx.composite(k, l))]
    }))
}

/// Inverse of [`realign`].
pub fn unrealign(r: &ComplexMatrix, idx: BipartiteIndex) -> Result<ComplexMatrix> {
    let (m, n) = (idx.m, idx.n);
    if r.rows() != m * m || r.cols() != n * n {
        return Err(Error::Dimension(format!(
            "realigned matrix must be {}x{}, got {}x{}",
            m * m,
            n * n,
            r.rows(),
            r.cols()
        )));
    }
    Ok(ComplexMatrix::from_fn(idx.dim(), idx.dim(), |row, col| {
        let (i, j) = (row / n, row % n);
        let (k, l) = (col / n, col % n);
        r[(i * m + k, j * n + l)]
    }))
}

/// Singular values, in nalgebra's (descending) order.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    if a.rows() == 0 || a.cols() == 0 {
        return Ok(Vec::new());
    }
    let svd = a
        .to_nalgebra()
        .try_svd(false, false, f64::EPSILON, SVD_MAX_ITER)
        .ok_or_else(|| Error::Numerical(format!("SVD of a {}x{} matrix did not converge", a.rows(), a.cols())))?;
    Ok(svd.singular_values.iter().copied().collect())
}

/// Sum of singular values.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(a)?.iter().sum())
}

fn hermitian_checked(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("eigensolve needs a square matrix, got {}x{}", a.rows(), a.cols())));
    }
    let dev = a.hermitian_deviation();
    if dev > HERMITIAN_TOL * (1.0 + a.max_abs()) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    Ok(a.hermitian_part())
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn eig_hermitian(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(eigh(a)?.0)
}

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues and the
/// matching unit eigenvectors as the columns of the returned matrix.
pub fn eigh(a: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let h = hermitian_checked(a)?;
    if h.rows() == 0 {
        return Ok((Vec::new(), h));
    }
    let eig = h
        .to_nalgebra()
        .try_symmetric_eigen(f64::EPSILON, EIG_MAX_ITER)
        .ok_or_else(|| Error::Numerical(format!("Hermitian eigensolve of a {0}x{0} matrix did not converge", h.rows())))?;
    let mut order: Vec<usize> = (0..h.rows()).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(h.rows(), h.rows(), |r, col| eig.eigenvectors[(r, order[col])]);
    Ok((values, vectors))
}

pub fn min_eigenvalue(a: &ComplexMatrix) -> Result<f64> {
    Ok(eig_hermitian(a)?.first().copied().unwrap_or(0.0))
}

/// `f(a)` for Hermitian `a`, applied through the spectrum.
pub fn hermitian_function(a: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let (vals, vecs) = eigh(a)?;
    let d = a.rows();
    let fv: Vec<f64> = vals.iter().map(|&x| f(x)).collect();
    Ok(ComplexMatrix::from_fn(d, d, |i, j| {
        (0..d).map(|k| vecs[(i, k)] * fv[k] * vecs[(j, k)].conj()).sum()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell() -> ComplexMatrix {
        let s = 0.5f64.sqrt();
        ComplexMatrix::outer(&[cr(s), cr(0.0), cr(0.0), cr(s)])
    }

    fn idx(m: usize, n: usize) -> BipartiteIndex {
        BipartiteIndex::new(m, n).unwrap()
    }

    #[test]
    fn kron_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2).unwrap(), ComplexMatrix::identity(4));
        let d = kron(&ComplexMatrix::from_real_diag(&[1.0, 2.0]), &ComplexMatrix::from_real_diag(&[3.0])).unwrap();
        assert_eq!(d, ComplexMatrix::from_real_diag(&[3.0, 6.0]));

        let x = ComplexMatrix::new(2, 2, vec![cr(0.0), cr(1.0), cr(1.0), cr(0.0)]).unwrap();
        let xx = kron(&x, &x).unwrap();
        let v = xx.mul_vec(&[cr(1.0), cr(0.0), cr(0.0), cr(0.0)]);
        assert_eq!(v, vec![cr(0.0), cr(0.0), cr(0.0), cr(1.0)]);
    }

    #[test]
    fn kron_respects_cap() {
        let a = ComplexMatrix::identity(64);
        let b = ComplexMatrix::identity(65);
        assert!(matches!(kron(&a, &b), Err(Error::SizeLimit { dim: 4160, cap: 4096 })));
    }

    #[test]
    fn partial_trace_of_bell_is_maximally_mixed() {
        let rb = partial_trace(&bell(), idx(2, 2), Side::B).unwrap();
        assert!(rb.max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-15);
        let ra = partial_trace(&bell(), idx(2, 2), Side::A).unwrap();
        assert!(ra.max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn partial_trace_of_product() {
        let ra = ComplexMatrix::new(2, 2, vec![cr(0.7), c(0.1, 0.2), c(0.1, -0.2), cr(0.3)]).unwrap();
        let rb = ComplexMatrix::from_real_diag(&[0.2, 0.5, 0.3]).scale(2.0);
        let rho = kron(&ra, &rb).unwrap();
        let out = partial_trace(&rho, idx(2, 3), Side::B).unwrap();
        assert!(out.max_abs_diff(&ra.scale(2.0)) < 1e-14);
        assert!(matches!(partial_trace(&rho, idx(3, 3), Side::B), Err(Error::Dimension(_))));
    }

    #[test]
    fn partial_transpose_of_bell() {
        let pt = partial_transpose_a(&bell(), idx(2, 2)).unwrap();
        let ev = eig_hermitian(&pt).unwrap();
        let expect = [-0.5, 0.5, 0.5, 0.5];
        for (a, b) in ev.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((trace_norm(&pt).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn partial_transpose_index_map() {
        let i = idx(2, 3);
        let rho = ComplexMatrix::from_fn(6, 6, |r, col| c(r as f64, col as f64));
        let pt = partial_transpose_a(&rho, i).unwrap();
        // ((1,2),(0,1)) <- ((0,2),(1,1))
        assert_eq!(pt[(i.composite(1, 2), i.composite(0, 1))], rho[(i.composite(0, 2), i.composite(1, 1))]);
    }

    #[test]
    fn realign_index_map_and_inverse() {
        let i = idx(2, 3);
        let rho = ComplexMatrix::from_fn(6, 6, |r, col| c(r as f64, -(col as f64)));
        let r = realign(&rho, i).unwrap();
        assert_eq!((r.rows(), r.cols()), (4, 9));
        // R[(i*m+k, j*n+l)] = rho[((i,j),(k,l))] with i=1,k=0,j=2,l=1
        assert_eq!(r[(2, 7)], rho[(i.composite(1, 2), i.composite(0, 1))]);
        assert_eq!(unrealign(&r, i).unwrap(), rho);
        let z = realign(&ComplexMatrix::zeros(6, 6), i).unwrap();
        assert_eq!(z, ComplexMatrix::zeros(4, 9));
    }

    #[test]
    fn trace_norm_examples() {
        assert!((trace_norm(&ComplexMatrix::from_real_diag(&[1.0, -2.0, 3.0])).unwrap() - 6.0).abs() < 1e-12);
        assert!((trace_norm(&bell()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eig_examples() {
        assert_eq!(eig_hermitian(&ComplexMatrix::identity(3)).unwrap(), vec![1.0, 1.0, 1.0]);
        let ev = eig_hermitian(&ComplexMatrix::from_real_diag(&[3.0, -1.0, 2.0])).unwrap();
        assert_eq!(ev, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn eig_rejects_non_hermitian_but_symmetrizes_roundoff() {
        let mut a = ComplexMatrix::from_real_diag(&[1.0, 2.0]);
        a[(0, 1)] = cr(0.5);
        assert!(matches!(eig_hermitian(&a), Err(Error::NotHermitian { .. })));
        a[(1, 0)] = cr(0.5 + 1e-12);
        let ev = eig_hermitian(&a).unwrap();
        assert!((ev.iter().sum::<f64>() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn matrix_rejects_bad_input() {
        assert!(matches!(ComplexMatrix::new(2, 2, vec![cr(0.0); 3]), Err(Error::Dimension(_))));
        assert!(matches!(ComplexMatrix::new(1, 1, vec![cr(f64::NAN)]), Err(Error::NonFinite)));
        assert!(BipartiteIndex::new(1, 3).is_err());
    }

    #[test]
    fn bipartite_kron_matches_entry_product() {
        let ia = idx(2, 2);
        let ib = idx(2, 3);
        let a = ComplexMatrix::from_fn(4, 4, |r, col| c(r as f64 + 1.0, col as f64));
        let b = ComplexMatrix::from_fn(6, 6, |r, col| c(col as f64, 1.0 - r as f64));
        let (out, i) = bipartite_kron(&a, ia, &b, ib, DEFAULT_DIM_CAP).unwrap();
        assert_eq!((i.m(), i.n()), (4, 6));
        for (i1, j1, k1, l1, i2, j2, k2, l2) in [(1, 0, 0, 1, 1, 2, 0, 1), (0, 1, 1, 1, 0, 0, 1, 2)] {
            let row = i.composite(i1 * 2 + i2, j1 * 3 + j2);
            let col = i.composite(k1 * 2 + k2, l1 * 3 + l2);
            let want = a[(ia.composite(i1, j1), ia.composite(k1, l1))] * b[(ib.composite(i2, j2), ib.composite(k2, l2))];
            assert_eq!(out[(row, col)], want);
        }
    }
}
