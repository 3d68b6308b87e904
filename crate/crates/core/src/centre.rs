//! Real and complex centres of mass, `argmin_ε ‖B − εA‖` over `R` or `C`.
//!
//! Both objectives are norms of affine maps and therefore convex, so
//! one-dimensional line searches are sound. Since `‖B − εA‖ ≥ |ε|‖A‖ − ‖B‖`, any
//! minimizer satisfies `|ε| ≤ 2‖B‖/‖A‖`; that radius is the search bracket.
//! The complex problem is solved by nested line searches: the partial minimum
//! over `Im λ` of a jointly convex function is convex in `Re λ`, and the
//! inner search over `Im λ` is itself a real centre of mass.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::functionals::{mu_theta_at, Theta};
use crate::golden::golden_section;
use crate::linalg::{hermitian_eigen, inner, operator_norm, ComplexMatrix, ComplexVector, UnitVector};

const MAX_EVALUATIONS: usize = 400;

/// Real centre of mass `ε₀` of `B` with respect to `A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealCentreResult {
    pub epsilon0: f64,
    /// `‖B − ε₀A‖`
    pub distance: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
}

/// Complex (total) centre of mass `λ₀` of `B` with respect to `A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexCentreResult {
    pub lambda0: Complex64,
    /// `‖B − λ₀A‖`
    pub distance: f64,
    pub iterations: usize,
}

/// Attaining vector for the centre-of-mass characterization of `μ_θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessVector {
    pub f: UnitVector,
    /// centre of mass of `e^{iθ}I` with respect to `T`
    pub epsilon0: f64,
    /// `Re⟨(λI − ε₀T)f, Tf⟩`
    pub re_cross: f64,
    /// `‖λI − ε₀T‖ − ‖(λI − ε₀T)f‖`
    pub norm_gap: f64,
}

fn check_pair(b: &ComplexMatrix, a: &ComplexMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: b.dim(), found: a.dim() });
    }
    let a_norm = operator_norm(a);
    if a_norm == 0.0 {
        return Err(Error::ZeroOperator);
    }
    Ok(a_norm)
}

/// Value and a subgradient of `ε ↦ ‖B − εA‖`, from a top right singular
/// vector `v` of `M = B − εA`: `d/dε ‖M‖ = −Re⟨Av, Mv⟩/‖M‖`.
fn norm_and_slope(b: &ComplexMatrix, a: &ComplexMatrix, eps: f64) -> Result<(f64, f64)> {
    let m = b.sub_scaled(Complex64::new(eps, 0.0), a)?;
    let eig = hermitian_eigen(&m.gram())?;
    let sigma = eig.largest().max(0.0).sqrt();
    if sigma == 0.0 {
        return Ok((0.0, 0.0));
    }
    let v = eig.eigenvectors.column(0);
    let slope = -inner(&a.mul_vec(&v)?, &m.mul_vec(&v)?)?.re / sigma;
    Ok((sigma, slope))
}

/// `ε₀ = argmin_{ε∈R} ‖B − εA‖`.
///
/// Bisects on the sign of a subgradient, which stays reliable at smooth
/// minima where comparing nearly equal norms would not.
pub fn real_centre_of_mass(b: &ComplexMatrix, a: &ComplexMatrix) -> Result<RealCentreResult> {
    let a_norm = check_pair(b, a)?;
    let b_norm = operator_norm(b);
    let radius = 2.0 * b_norm / a_norm;
    if radius == 0.0 {
        return Ok(RealCentreResult { epsilon0: 0.0, distance: 0.0, bracket: (0.0, 0.0), iterations: 0 });
    }
    let (mut lo, mut hi) = (-radius, radius);
    let mut iterations = 0;
    while iterations < MAX_EVALUATIONS {
        let mid = 0.5 * (lo + hi);
        let (_, slope) = norm_and_slope(b, a, mid)?;
        iterations += 1;
        if slope > 0.0 {
            hi = mid;
        } else if slope < 0.0 {
            lo = mid;
        } else {
            (lo, hi) = (mid, mid);
        }
        if hi - lo <= 1e-12 * (1.0 + mid.abs()) {
            break;
        }
    }
    // norms near a smooth minimum differ only by roundoff, so the bracket
    // decides; ε = 0 is preferred when the bracket still contains it
    let eps = if lo <= 0.0 && 0.0 <= hi { 0.0 } else { 0.5 * (lo + hi) };
    let best = (eps, norm_and_slope(b, a, eps)?.0);
    Ok(RealCentreResult { epsilon0: best.0, distance: best.1, bracket: (-radius, radius), iterations })
}

/// `λ₀ = argmin_{λ∈C} ‖B − λA‖`.
pub fn total_centre_of_mass(b: &ComplexMatrix, a: &ComplexMatrix) -> Result<ComplexCentreResult> {
    let a_norm = check_pair(b, a)?;
    let b_norm = operator_norm(b);
    let radius = 2.0 * b_norm / a_norm;
    if radius == 0.0 {
        return Ok(ComplexCentreResult { lambda0: Complex64::new(0.0, 0.0), distance: 0.0, iterations: 0 });
    }
    // B − (x + iy)A = (B − xA) − y·(iA): the inner problem is a real centre
    let ia = a.scale(Complex64::new(0.0, 1.0));
    let inner = |x: f64| real_centre_of_mass(&b.sub_scaled(Complex64::new(x, 0.0), a)?, &ia);
    let mut evaluations = 0;
    let mut failure = None;
    let outer = golden_section(
        |x| match inner(x) {
            Ok(r) => {
                evaluations += r.iterations;
                r.distance
            }
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        },
        -radius,
        radius,
        |x| 1e-11 * (1.0 + x.abs()),
        MAX_EVALUATIONS,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let best_inner = inner(outer.x)?;
    evaluations += best_inner.iterations;
    let mut lambda0 = Complex64::new(outer.x, best_inner.epsilon0);
    let mut distance = best_inner.distance;
    if b_norm <= distance {
        lambda0 = Complex64::new(0.0, 0.0);
        distance = b_norm;
    }
    Ok(ComplexCentreResult { lambda0, distance, iterations: evaluations })
}

/// `√(1 − d²)` with `d = min_ε ‖I − ε·e^{−iθ}T‖`.
///
/// This equals `inf_f |μ_θ(f)|`, which coincides with `μ_θ(T)` only when
/// `μ_θ(f) ≥ 0` on the whole sphere.
pub fn cos_from_distance(t: &ComplexMatrix, theta: Theta) -> Result<f64> {
    let n = t.dim();
    let rotated = t.scale(theta.unit().conj());
    let d = real_centre_of_mass(&ComplexMatrix::identity(n), &rotated)?.distance;
    Ok((1.0 - d * d).max(0.0).sqrt())
}

/// `√(1 − d²)` with `d = min_λ ‖I − λT‖`; equals `|cos|T`.
pub fn total_cos_from_distance(t: &ComplexMatrix) -> Result<f64> {
    let n = t.dim();
    let d = total_centre_of_mass(&ComplexMatrix::identity(n), t)?.distance;
    Ok((1.0 - d * d).max(0.0).sqrt())
}

/// A unit `f` with `‖(λI − ε₀T)f‖ = ‖λI − ε₀T‖` and
/// `Re⟨(λI − ε₀T)f, Tf⟩ = 0`, where `λ = e^{iθ}` and `ε₀` is the real centre
/// of mass of `λI` with respect to `T`.
///
/// The vector is taken from the top right-singular subspace of
/// `M = λI − ε₀T`; inside it, `f ↦ Re⟨Mf, Tf⟩` is the Hermitian form of
/// `(M*T + T*M)/2`, and mixing its extreme eigenvectors with real weights
/// makes the form vanish exactly.
pub fn witness_vector(t: &ComplexMatrix, theta: Theta) -> Result<WitnessVector> {
    let n = t.dim();
    let lambda = theta.unit();
    let centre = real_centre_of_mass(&ComplexMatrix::scalar(n, lambda), t)?;
    let eps0 = centre.epsilon0;
    let m = ComplexMatrix::scalar(n, lambda).sub_scaled(Complex64::new(eps0, 0.0), t)?;

    let gram = hermitian_eigen(&m.gram())?;
    let top = gram.largest();
    let cluster_tol = 1e-8 * top.max(1.0);
    let k = gram.eigenvalues.iter().take_while(|&&s| s >= top - cluster_tol).count();
    let span: Vec<ComplexVector> = (0..k).map(|j| gram.eigenvectors.column(j)).collect();

    // compressed form H_S = V_S*·H·V_S, H = (M*T + T*M)/2
    let mt: Vec<ComplexVector> = span.iter().map(|v| m.mul_vec(v).expect("dim")).collect();
    let tv: Vec<ComplexVector> = span.iter().map(|v| t.mul_vec(v).expect("dim")).collect();
    let mut hs = vec![Complex64::new(0.0, 0.0); k * k];
    for i in 0..k {
        for j in 0..k {
            // ⟨H v_j, v_i⟩ = (⟨M v_j, T v_i⟩ + ⟨T v_j, M v_i⟩)/2
            let x = inner(&mt[j], &tv[i]).expect("dim") + inner(&tv[j], &mt[i]).expect("dim");
            hs[i * k + j] = x * 0.5;
        }
    }
    let compressed = hermitian_eigen(&ComplexMatrix::new(k, hs)?)?;
    let (hi, lo) = (compressed.largest(), compressed.smallest());
    let u_hi = compressed.eigenvectors.column(0);
    let u_lo = compressed.eigenvectors.column(k - 1);
    let coeffs = if lo >= 0.0 {
        u_lo
    } else if hi <= 0.0 {
        u_hi
    } else {
        // cos²φ·lo + sin²φ·hi = 0
        let cos2 = hi / (hi - lo);
        u_lo.scale(Complex64::new(cos2.sqrt(), 0.0)).axpy(Complex64::new((1.0 - cos2).sqrt(), 0.0), &u_hi)
    };
    let mut f = ComplexVector::zeros(n);
    for (j, v) in span.iter().enumerate() {
        f = f.axpy(coeffs[j], v);
    }
    let f = f.normalized().ok_or(Error::NoAdmissibleVector)?.canonical_phase();

    let mf = m.mul_vec(&f)?;
    let tf = t.mul_vec(&f)?;
    let re_cross = inner(&mf, &tf)?.re;
    let norm_gap = (top.max(0.0).sqrt() - mf.norm()).max(0.0);
    Ok(WitnessVector { f, epsilon0: eps0, re_cross, norm_gap })
}

/// `μ_θ` evaluated at [`witness_vector`]; this is the limit value in the
/// centre-of-mass characterization of `μ_θ(T)`.
pub fn witness_mu(t: &ComplexMatrix, theta: Theta) -> Result<(WitnessVector, f64)> {
    let w = witness_vector(t, theta)?;
    let mu = mu_theta_at(t, theta, &w.f)?.value;
    Ok((w, mu))
}

/// Checks the local-minimum certificate of a complex centre on a small circle.
pub fn complex_centre_certificate(b: &ComplexMatrix, a: &ComplexMatrix, c: &ComplexCentreResult) -> bool {
    (0..16).all(|k| {
        let z = c.lambda0 + Complex64::from_polar(1e-3, TAU * k as f64 / 16.0);
        let d = operator_norm(&b.sub_scaled(z, a).expect("same dimension"));
        c.distance <= d + 1e-7
    })
}
