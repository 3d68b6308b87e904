use std::ops::{Deref, Index};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex n-vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    data: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(data: Vec<Complex64>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        if let Some(i) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(format!("vector entry {i}")));
        }
        Ok(Self { data })
    }

    pub(crate) fn from_vec_unchecked(data: Vec<Complex64>) -> Self {
        Self { data }
    }

    pub fn zeros(n: usize) -> Self {
        Self { data: vec![Complex64::new(0.0, 0.0); n] }
    }

    /// The standard basis vector `e_k` of dimension `n`.
    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = Self::zeros(n);
        v.data[k] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { data: self.data.iter().map(|z| z * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        Self { data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        Self { data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    /// `self + c·other`
    pub fn axpy(&self, c: Complex64, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        Self { data: self.data.iter().zip(&other.data).map(|(a, b)| a + c * b).collect() }
    }

    /// Rescale to unit norm; `None` for the zero vector.
    pub fn normalized(&self) -> Option<UnitVector> {
        let nrm = self.norm();
        if nrm == 0.0 || !nrm.is_finite() {
            return None;
        }
        Some(UnitVector(self.scale(Complex64::new(1.0 / nrm, 0.0))))
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.data[i]
    }
}

/// `⟨u, v⟩ = Σ uᵢ·conj(vᵢ)`.
pub fn inner(u: &ComplexVector, v: &ComplexVector) -> Result<Complex64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch { expected: u.len(), found: v.len() });
    }
    Ok(inner_slices(u.as_slice(), v.as_slice()))
}

pub(crate) fn inner_slices(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

/// A complex vector of unit Euclidean norm.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector(ComplexVector);

impl UnitVector {
    pub const TOLERANCE: f64 = 1e-12;

    /// Accepts `v` only if `|‖v‖ − 1| ≤ 1e-12`.
    pub fn new(v: ComplexVector) -> Result<Self> {
        let nrm = v.norm();
        if (nrm - 1.0).abs() > Self::TOLERANCE {
            return Err(Error::NotUnit(nrm));
        }
        Ok(Self(v))
    }

    pub fn basis(n: usize, k: usize) -> Self {
        Self(ComplexVector::basis(n, k))
    }

    pub fn as_vector(&self) -> &ComplexVector {
        &self.0
    }

    pub fn into_vector(self) -> ComplexVector {
        self.0
    }

    /// Multiply by the global phase that makes the largest-modulus entry real
    /// and positive. The functionals are phase invariant, so this only picks a
    /// canonical representative.
    pub fn canonical_phase(&self) -> Self {
        let mut best = 0;
        let mut best_mod = -1.0;
        for (i, z) in self.0.as_slice().iter().enumerate() {
            // strict comparison with a relative margin keeps the choice stable
            // when two entries have (numerically) equal modulus
            if z.norm() > best_mod * (1.0 + 1e-9) {
                best = i;
                best_mod = z.norm();
            }
        }
        let z = self.0[best];
        if z.norm() == 0.0 {
            return self.clone();
        }
        let phase = z.conj() / z.norm();
        Self(self.0.scale(phase))
    }
}

impl Deref for UnitVector {
    type Target = ComplexVector;

    fn deref(&self) -> &ComplexVector {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inner_is_linear_in_first_slot() {
        let u = ComplexVector::new(vec![c(1.0, 2.0), c(0.5, -1.0)]).unwrap();
        let v = ComplexVector::new(vec![c(-0.3, 0.7), c(2.0, 0.1)]).unwrap();
        let a = c(0.2, -1.3);
        let lhs = inner(&u.scale(a), &v).unwrap();
        let rhs = a * inner(&u, &v).unwrap();
        assert!((lhs - rhs).norm() < 1e-14);
        let lhs = inner(&u, &v.scale(a)).unwrap();
        let rhs = a.conj() * inner(&u, &v).unwrap();
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn inner_basics() {
        let e1 = ComplexVector::basis(2, 0);
        assert_eq!(inner(&e1, &e1).unwrap(), c(1.0, 0.0));
        let short = ComplexVector::basis(3, 0);
        assert!(matches!(inner(&e1, &short), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn unit_vector_rejects_non_unit() {
        let v = ComplexVector::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(UnitVector::new(v.clone()), Err(Error::NotUnit(_))));
        let u = v.normalized().unwrap();
        assert!((u.norm() - 1.0).abs() < 1e-15);
        assert!(ComplexVector::zeros(3).normalized().is_none());
    }

    #[test]
    fn non_finite_rejected() {
        assert!(ComplexVector::new(vec![c(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn canonical_phase_makes_largest_entry_real() {
        let v = ComplexVector::new(vec![c(0.1, 0.2), c(-0.6, 0.7)]).unwrap().normalized().unwrap();
        let w = v.canonical_phase();
        assert!(w[1].im.abs() < 1e-15 && w[1].re > 0.0);
        assert!((w.norm() - 1.0).abs() < 1e-15);
    }
}
