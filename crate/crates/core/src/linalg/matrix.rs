use std::ops::Index;

use num_complex::Complex64;

use super::eigen::jacobi_eigen;
use super::vector::ComplexVector;
use super::MAX_DIM;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds an `n×n` matrix from row-major entries. Rejects `n = 0`,
    /// `n > 128`, wrong entry counts and non-finite values.
    pub fn new(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if n > MAX_DIM {
            return Err(Error::TooLarge(n));
        }
        if data.len() != n * n {
            return Err(Error::NotSquare { expected: n * n, found: data.len() });
        }
        if let Some(k) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(format!("entry ({}, {})", k / n, k % n)));
        }
        Ok(Self { n, data })
    }

    /// Builds a matrix from rows; every row must have the same length as the
    /// number of rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::NotSquare { expected: n * n, found: n * row.len() });
            }
            data.extend_from_slice(row);
        }
        Self::new(n, data)
    }

    pub(crate) fn from_vec_unchecked(n: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        Self { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, ONE)
    }

    /// `c·I`
    pub fn scalar(n: usize, c: Complex64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn from_diag(diag: &[Complex64]) -> Result<Self> {
        let n = diag.len();
        let mut data = vec![ZERO; n * n];
        for (i, d) in diag.iter().enumerate() {
            data[i * n + i] = *d;
        }
        Self::new(n, data)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn diag(&self) -> Vec<Complex64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector::from_vec_unchecked((0..self.n).map(|i| self.get(i, j)).collect())
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[ComplexVector]) -> Result<Self> {
        let n = cols.len();
        let mut data = vec![ZERO; n * n];
        for (j, col) in cols.iter().enumerate() {
            if col.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: col.len() });
            }
            for i in 0..n {
                data[i * n + j] = col[i];
            }
        }
        Self::new(n, data)
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: v.len() });
        }
        Ok(ComplexVector::from_vec_unchecked(self.apply(v.as_slice())))
    }

    pub(crate) fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.n];
        self.apply_into(v, &mut out);
        out
    }

    pub(crate) fn apply_into(&self, v: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(v.len(), self.n);
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.row(i).iter().zip(v).map(|(a, b)| a * b).sum();
        }
    }

    /// `M*·v` without forming the adjoint.
    pub(crate) fn apply_adjoint_into(&self, v: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(v.len(), self.n);
        out.iter_mut().for_each(|o| *o = ZERO);
        for (i, vi) in v.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a.conj() * vi;
            }
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let n = self.n;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(Self { n, data })
    }

    /// `M*·M`, Hermitian by construction.
    pub fn gram(&self) -> Self {
        let n = self.n;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for j in i..n {
                let s: Complex64 = (0..n).map(|k| self.get(k, i).conj() * self.get(k, j)).sum();
                data[i * n + j] = s;
                data[j * n + i] = s.conj();
            }
            data[i * n + i].im = 0.0;
        }
        Self { n, data }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect();
        Ok(Self { n: self.n, data })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// `self − c·other`
    pub fn sub_scaled(&self, c: Complex64, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - c * b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|z| z * c).collect() }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| *z == ZERO)
    }

    /// Frobenius norm of `M − M*`.
    pub fn skew_norm(&self) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += (self.get(i, j) - self.get(j, i).conj()).norm_sqr();
            }
        }
        s.sqrt()
    }

    pub fn is_hermitian(&self) -> bool {
        self.skew_norm() <= 1e-10 * self.frobenius_norm().max(1.0)
    }

    /// True when `M*M = MM*` up to roundoff.
    pub fn is_normal(&self) -> bool {
        let adj = adjoint(self);
        let lhs = adj.matmul(self).expect("same dimension");
        let rhs = self.matmul(&adj).expect("same dimension");
        lhs.sub(&rhs).expect("same dimension").frobenius_norm() <= 1e-10 * self.frobenius_norm().powi(2).max(1.0)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

/// Conjugate transpose.
pub fn adjoint(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.n;
    let mut data = vec![ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            data[i * n + j] = m.data[j * n + i].conj();
        }
    }
    ComplexMatrix { n, data }
}

/// Cartesian decomposition `T = A + iB` with `A = (T + T*)/2` and
/// `B = (T − T*)/(2i)`, both Hermitian.
pub fn hermitian_parts(t: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = t.n;
    let mut a = vec![ZERO; n * n];
    let mut b = vec![ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            let tij = t.data[i * n + j];
            let tji = t.data[j * n + i].conj();
            a[i * n + j] = (tij + tji) * 0.5;
            // (x − y)/(2i) = −i(x − y)/2
            let d = (tij - tji) * 0.5;
            b[i * n + j] = Complex64::new(d.im, -d.re);
        }
    }
    (ComplexMatrix { n, data: a }, ComplexMatrix { n, data: b })
}

/// Spectral norm: the square root of the largest eigenvalue of `M*M`.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    if m.is_zero() {
        return 0.0;
    }
    let (values, _) = jacobi_eigen(&m.gram(), false);
    values.iter().copied().fold(0.0, f64::max).max(0.0).sqrt()
}
