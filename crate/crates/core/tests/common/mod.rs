#![allow(dead_code)]

use antieigen::{ComplexMatrix, ComplexVector, Theta};
use num_complex::Complex64;
use proptest::prelude::*;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn th(x: f64) -> Theta {
    Theta::new(x).unwrap()
}

/// `diag(2 − 3i, 3 + 2i)`, the worked example.
pub fn example() -> ComplexMatrix {
    ComplexMatrix::from_diag(&[c(2.0, -3.0), c(3.0, 2.0)]).unwrap()
}

pub fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

pub fn matrix(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = ComplexMatrix> {
    n.prop_flat_map(|n| {
        proptest::collection::vec(complex(), n * n).prop_map(move |d| ComplexMatrix::new(n, d).unwrap())
    })
    .prop_filter("nonzero", |m| m.max_abs() > 1e-3)
}

pub fn matrix_and_vector(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (ComplexMatrix, ComplexVector)> {
    matrix(n).prop_flat_map(|m| {
        let n = m.dim();
        proptest::collection::vec(complex(), n)
            .prop_filter("nonzero vector", |v| v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3)
            .prop_map(move |v| (m.clone(), ComplexVector::new(v).unwrap()))
    })
}

pub fn angle() -> impl Strategy<Value = f64> {
    -10.0..10.0f64
}

/// Unitary matrix from the eigenvectors of a random Hermitian matrix.
pub fn unitary(n: usize, seed: u64) -> ComplexMatrix {
    let spec =
        antieigen::verify::RandomMatrixSpec { n, ensemble: antieigen::verify::Ensemble::Hermitian, scale: 1.0, seed };
    antieigen::linalg::hermitian_eigen(&spec.generate().unwrap()).unwrap().eigenvectors
}
