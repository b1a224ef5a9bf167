//! Dense complex Hermitian matrices and a cyclic Jacobi eigensolver.

use std::ops::{Index, IndexMut};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Complex, Real};

/// Square, row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let entries = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        Self { dim, entries }
    }

    /// Builds a matrix from rows, rejecting ragged, empty or non-finite input.
    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Empty);
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    row: i,
                    cols: row.len(),
                });
            }
            for (j, z) in row.iter().enumerate() {
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite(i, j));
                }
            }
            entries.extend(row);
        }
        Ok(Self { dim, entries })
    }

    pub fn from_real_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        Self::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(|x| Complex::new(x, T::zero())).collect())
                .collect(),
        )
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn frobenius_norm(&self) -> T {
        self.entries
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.entries
            .iter()
            .fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * rhs.entries[k * n + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.dim, v.len(), "mul_vec dimension mismatch");
        self.entries
            .chunks_exact(self.dim)
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(Complex::zero(), |acc, (a, x)| acc + *a * *x)
            })
            .collect()
    }

    /// Largest entrywise `|m_ij - conj(m_ji)|`.
    pub fn hermitian_deviation(&self) -> T {
        let mut dev = T::zero();
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).norm()))
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.entries[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.entries[i * self.dim + j]
    }
}

/// True iff `max |m_ij - conj(m_ji)| <= tol`.
pub fn check_hermitian<T: Real>(m: &ComplexMatrix<T>, tol: T) -> bool {
    m.hermitian_deviation() <= tol
}

/// A complex matrix known to be Hermitian.
///
/// Construction accepts matrices that are Hermitian up to a relative
/// rounding tolerance and stores the exactly Hermitian part
/// `(M + M^dagger) / 2`, so the diagonal is real.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix<T> {
    inner: ComplexMatrix<T>,
}

impl<T: Real> HermitianMatrix<T> {
    pub fn new(m: ComplexMatrix<T>) -> Result<Self> {
        if m.dim() == 0 {
            return Err(Error::Empty);
        }
        for (k, z) in m.entries().iter().enumerate() {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFinite(k / m.dim(), k % m.dim()));
            }
        }
        let deviation = m.hermitian_deviation();
        if deviation > T::hermitian_tolerance() * m.max_abs() {
            return Err(Error::NotHermitian {
                deviation: deviation.as_f64(),
            });
        }
        let half = T::lit(0.5);
        let sym = ComplexMatrix::from_fn(m.dim(), |i, j| {
            if i == j {
                Complex::new(m[(i, i)].re, T::zero())
            } else {
                (m[(i, j)] + m[(j, i)].conj()).scale(half)
            }
        });
        Ok(Self { inner: sym })
    }

    pub fn from_real_symmetric(rows: Vec<Vec<T>>) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_rows(rows)?)
    }

    pub fn diagonal(values: &[T]) -> Result<Self> {
        let n = values.len();
        Self::new(ComplexMatrix::from_fn(n, |i, j| {
            if i == j {
                Complex::new(values[i], T::zero())
            } else {
                Complex::zero()
            }
        }))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix<T> {
        &self.inner
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.inner
    }

    pub fn frobenius_norm(&self) -> T {
        self.inner.frobenius_norm()
    }

    pub fn trace(&self) -> T {
        (0..self.dim()).fold(T::zero(), |acc, i| acc + self.inner[(i, i)].re)
    }
}

impl<T> Index<(usize, usize)> for HermitianMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, idx: (usize, usize)) -> &Complex<T> {
        &self.inner[idx]
    }
}

/// Eigenvalues (ascending) and unitary eigenvector matrix of a Hermitian
/// operator, together with the weights `|<0|e_n>|^2` of basis state 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition<T> {
    eigenvalues: Vec<T>,
    eigenvectors: ComplexMatrix<T>,
    zero_overlaps: Vec<T>,
}

impl<T: Real> SpectralDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    /// Column `n` is the eigenvector belonging to `eigenvalues()[n]`.
    pub fn eigenvectors(&self) -> &ComplexMatrix<T> {
        &self.eigenvectors
    }

    /// `|<0|e_n>|^2` for every eigenvector.
    pub fn zero_overlaps(&self) -> &[T] {
        &self.zero_overlaps
    }

    /// `|<index|e_n>|^2` for an arbitrary basis state.
    pub fn overlaps_with(&self, index: usize) -> Vec<T> {
        (0..self.dim())
            .map(|n| self.eigenvectors[(index, n)].norm_sqr())
            .collect()
    }
}

/// Stopping rule of the Jacobi iteration.
#[derive(Debug, Clone, Copy)]
pub struct JacobiOptions<T> {
    /// Relative off-diagonal threshold, `off(H) <= tolerance * ||H||_F`.
    pub tolerance: T,
    pub max_sweeps: usize,
}

impl<T: Real> Default for JacobiOptions<T> {
    fn default() -> Self {
        Self {
            tolerance: T::jacobi_tolerance(),
            max_sweeps: 64,
        }
    }
}

/// Diagonalizes `h` with the cyclic complex Jacobi method.
pub fn eigh<T: Real>(h: &HermitianMatrix<T>) -> Result<SpectralDecomposition<T>> {
    eigh_with(h, JacobiOptions::default())
}

pub fn eigh_with<T: Real>(
    h: &HermitianMatrix<T>,
    opts: JacobiOptions<T>,
) -> Result<SpectralDecomposition<T>> {
    let n = h.dim();
    let mut a = h.as_matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let threshold = opts.tolerance * h.frobenius_norm();

    let mut converged = false;
    let mut off = off_diagonal_norm(&a);
    for _ in 0..opts.max_sweeps {
        if off <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        off = off_diagonal_norm(&a);
    }
    if !converged && off > threshold {
        return Err(Error::NonConvergence {
            sweeps: opts.max_sweeps,
            off: off.as_f64(),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable: equal eigenvalues keep their column order
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());

    let eigenvalues: Vec<T> = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, col| v[(i, order[col])]);
    let zero_overlaps = (0..n)
        .map(|col| eigenvectors[(0, col)].norm_sqr())
        .collect();
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
        zero_overlaps,
    })
}

fn off_diagonal_norm<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.dim();
    let mut sum = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Applies `A <- G^dagger A G`, `V <- V G` with the unitary `G` that
/// annihilates `A[p][q]`.
///
/// Writing `A[p][q] = r e^{i phi}`, `G = diag(1, e^{-i phi}) R` on the
/// (p, q) plane, where `R` is the real Jacobi rotation of the phase-free
/// block `[[a_pp, r], [r, a_qq]]`.
fn rotate<T: Real>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r.is_zero() {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq.unscale(r);
    let two = T::lit(2.0);

    let theta = (aqq - app) / (two * r);
    let t = {
        let t = T::one() / (theta.abs() + theta.hypot(T::one()));
        if theta < T::zero() {
            -t
        } else {
            t
        }
    };
    let c = T::one() / t.hypot(T::one());
    let s = t * c;

    // G entries in the (p, q) plane
    let g_pp = Complex::new(c, T::zero());
    let g_pq = Complex::new(s, T::zero());
    let g_qp = phase.conj().scale(-s);
    let g_qq = phase.conj().scale(c);

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }

    a[(p, p)] = Complex::new(app - t * r, T::zero());
    a[(q, q)] = Complex::new(aqq + t * r, T::zero());
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
}

/// Rebuilds `V diag(E) V^dagger`.
pub fn reconstruct<T: Real>(d: &SpectralDecomposition<T>) -> HermitianMatrix<T> {
    let n = d.dim();
    let v = &d.eigenvectors;
    let m = ComplexMatrix::from_fn(n, |i, j| {
        (0..n).fold(Complex::zero(), |acc, k| {
            acc + v[(i, k)] * v[(j, k)].conj() * d.eigenvalues[k]
        })
    });
    HermitianMatrix::new(m).expect("V diag(E) V^dagger is Hermitian")
}
