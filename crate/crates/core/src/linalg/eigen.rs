//! Cyclic Jacobi eigensolver for complex Hermitian matrices.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-13;

/// Eigenvalues sorted in descending order with matching unit eigenvectors
/// stored as the columns of `eigenvectors`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigenDecomposition {
    pub fn largest(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn smallest(&self) -> f64 {
        *self.eigenvalues.last().expect("n >= 1")
    }
}

/// Eigendecomposition of a Hermitian matrix. Inputs whose skew part exceeds
/// `1e-10·max(1, ‖H‖_F)` are rejected.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermitianEigenDecomposition> {
    let skew = h.skew_norm();
    if skew > 1e-10 * h.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian(skew));
    }
    let (eigenvalues, vectors) = jacobi_eigen(h, true);
    Ok(HermitianEigenDecomposition { eigenvalues, eigenvectors: vectors.expect("requested") })
}

/// Runs cyclic Jacobi sweeps on the Hermitian part of `h` until the
/// off-diagonal Frobenius mass drops below `1e-13·‖H‖_F`, plus one more.
pub(crate) fn jacobi_eigen(h: &ComplexMatrix, want_vectors: bool) -> (Vec<f64>, Option<ComplexMatrix>) {
    let n = h.dim();
    // work on the exactly Hermitian average
    let mut a: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = (h.get(i, j) + h.get(j, i).conj()) * 0.5;
        }
        a[i * n + i].im = 0.0;
    }
    let mut v = if want_vectors { Some(ComplexMatrix::identity(n).as_slice().to_vec()) } else { None };

    let total = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let threshold = OFF_DIAGONAL_TOL * total;

    // Convergence is quadratic, so one sweep past the threshold takes the
    // off-diagonal mass to roundoff level; eigenvector accuracy needs that.
    let mut polished = false;
    for _sweep in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&a, n);
        if off == 0.0 || polished {
            break;
        }
        polished = off <= threshold;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, v.as_deref_mut(), n, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = v.map(|v| {
        let mut sorted = vec![Complex64::new(0.0, 0.0); n * n];
        for (new_col, &old_col) in order.iter().enumerate() {
            for r in 0..n {
                sorted[r * n + new_col] = v[r * n + old_col];
            }
        }
        ComplexMatrix::from_vec_unchecked(n, sorted)
    });
    (values, vectors)
}

fn off_diagonal_norm(a: &[Complex64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Annihilates `a[p][q]` with the unitary `U = diag-phase · real rotation`
/// and updates `a ← U*·a·U`, `v ← v·U`.
fn rotate(a: &mut [Complex64], v: Option<&mut [Complex64]>, n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    // skip rotations that cannot change the diagonal in floating point
    if mag <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[p * n + q] = Complex64::new(0.0, 0.0);
        a[q * n + p] = Complex64::new(0.0, 0.0);
        return;
    }
    let phase = apq / mag; // e^{iφ}
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 { 1.0 / (tau + (1.0 + tau * tau).sqrt()) } else { -1.0 / (-tau + (1.0 + tau * tau).sqrt()) };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // U restricted to (p, q): [[c, s], [−s·e^{−iφ}, c·e^{−iφ}]]
    let upp = Complex64::new(c, 0.0);
    let upq = Complex64::new(s, 0.0);
    let uqp = -phase.conj() * s;
    let uqq = phase.conj() * c;

    // columns: a ← a·U
    for r in 0..n {
        let arp = a[r * n + p];
        let arq = a[r * n + q];
        a[r * n + p] = arp * upp + arq * uqp;
        a[r * n + q] = arp * upq + arq * uqq;
    }
    // rows: a ← U*·a
    for col in 0..n {
        let apc = a[p * n + col];
        let aqc = a[q * n + col];
        a[p * n + col] = upp.conj() * apc + uqp.conj() * aqc;
        a[q * n + col] = upq.conj() * apc + uqq.conj() * aqc;
    }
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);
    a[p * n + p].im = 0.0;
    a[q * n + q].im = 0.0;

    if let Some(v) = v {
        for r in 0..n {
            let vrp = v[r * n + p];
            let vrq = v[r * n + q];
            v[r * n + p] = vrp * upp + vrq * uqp;
            v[r * n + q] = vrp * upq + vrq * uqq;
        }
    }
}
