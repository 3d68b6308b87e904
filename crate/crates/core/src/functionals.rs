//! Pointwise functionals of a vector `f` for an operator `T`.
//!
//! With `w = ⟨Tf, f⟩`, `a = Re w`, `b = Im w`:
//!
//! * `μ_θ(f) = (cos θ·a + sin θ·b) / (‖Tf‖‖f‖)`, the θ-weighted turning ratio;
//! * `|w| / (‖Tf‖‖f‖)`, the total ratio, which is `sup_θ μ_θ(f)`;
//! * the stationarity residual
//!   `E(f) = 2‖Tf‖²(cos θ·Af + sin θ·Bf) − (a cos θ + b sin θ)(T*Tf + ‖Tf‖²f)`
//!   with `A = Re T`, `B = Im T`, which vanishes exactly at the critical points
//!   of `μ_θ` on the unit sphere;
//! * `ε*(f) = Re⟨e^{iθ}f, Tf⟩ / ‖Tf‖²`, the minimizer of `ε ↦ ‖(εT − e^{iθ})f‖²`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_parts, inner, operator_norm, ComplexMatrix, ComplexVector, UnitVector};

/// `‖Tf‖ ≤ DEGENERATE_RATIO·‖T‖·‖f‖` counts as `Tf = 0`.
pub const DEGENERATE_RATIO: f64 = 1e-12;

/// An angle in radians.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Theta(f64);

impl Theta {
    pub const ZERO: Theta = Theta(0.0);

    pub fn new(radians: f64) -> Result<Self> {
        if !radians.is_finite() {
            return Err(Error::InvalidArgument(format!("theta must be finite, got {radians}")));
        }
        Ok(Self(radians))
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// Representative in `[0, 2π)`.
    pub fn canonical(self) -> f64 {
        let r = self.0.rem_euclid(TAU);
        if r >= TAU {
            0.0
        } else {
            r
        }
    }

    pub fn cos(self) -> f64 {
        self.0.cos()
    }

    pub fn sin(self) -> f64 {
        self.0.sin()
    }

    /// `e^{iθ}`
    pub fn unit(self) -> Complex64 {
        Complex64::from_polar(1.0, self.0)
    }
}

impl From<Theta> for f64 {
    fn from(t: Theta) -> f64 {
        t.0
    }
}

/// One evaluation of `μ_θ` together with its ingredients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalSample {
    pub theta: Theta,
    pub value: f64,
    /// `Re⟨Tf, f⟩`
    pub numerator_a: f64,
    /// `Im⟨Tf, f⟩`
    pub numerator_b: f64,
    /// `‖Tf‖·‖f‖`
    pub denom: f64,
}

/// Maximizer of `θ ↦ μ_θ(f)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaSupremum {
    pub theta_star: Theta,
    pub value: f64,
    /// Set when `⟨Tf, f⟩ = 0`: every θ gives 0 and `theta_star` is reported as 0.
    pub undetermined: bool,
}

/// `T` together with the derived quantities the functionals need.
#[derive(Debug, Clone)]
pub(crate) struct Prepared<'a> {
    pub t: &'a ComplexMatrix,
    pub norm: f64,
}

/// Everything that follows from `Tf` for a fixed `f`.
#[derive(Debug, Clone)]
pub(crate) struct Probe {
    pub tf: Vec<Complex64>,
    /// `⟨Tf, f⟩`
    pub w: Complex64,
    /// `‖Tf‖²`
    pub tf_sqr: f64,
    /// `‖f‖²`
    pub f_sqr: f64,
}

impl<'a> Prepared<'a> {
    pub fn new(t: &'a ComplexMatrix) -> Result<Self> {
        let norm = operator_norm(t);
        if norm == 0.0 {
            return Err(Error::ZeroOperator);
        }
        Ok(Self { t, norm })
    }

    pub fn dim(&self) -> usize {
        self.t.dim()
    }

    /// Computes `Tf`; `None` if `f` is in the numerical kernel.
    pub fn probe(&self, f: &[Complex64]) -> Option<Probe> {
        let tf = self.t.apply(f);
        let tf_sqr: f64 = tf.iter().map(|z| z.norm_sqr()).sum();
        let f_sqr: f64 = f.iter().map(|z| z.norm_sqr()).sum();
        if tf_sqr.sqrt() <= DEGENERATE_RATIO * self.norm * f_sqr.sqrt() || f_sqr == 0.0 {
            return None;
        }
        let w = crate::linalg::inner_slices(&tf, f);
        Some(Probe { tf, w, tf_sqr, f_sqr })
    }

    pub fn probe_checked(&self, f: &[Complex64]) -> Result<Probe> {
        let f_sqr: f64 = f.iter().map(|z| z.norm_sqr()).sum();
        if f_sqr == 0.0 {
            return Err(Error::ZeroVector);
        }
        self.probe(f).ok_or_else(|| {
            let tf_norm = self.t.apply(f).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            Error::DegenerateVector(tf_norm)
        })
    }

    /// Value and Euclidean gradient of `f ↦ (α·Re w + β·Im w)/(‖Tf‖‖f‖)`
    /// at a unit `f`. The function is scale invariant, so the gradient is
    /// already tangent to the sphere.
    pub fn weighted_value_grad(&self, f: &[Complex64], alpha: f64, beta: f64) -> Option<(f64, Vec<Complex64>)> {
        let p = self.probe(f)?;
        let numer = alpha * p.w.re + beta * p.w.im;
        let tf_norm = p.tf_sqr.sqrt();
        let value = numer / (tf_norm * p.f_sqr.sqrt());
        // C·f with C = α·A + β·B = ((α − iβ)T + (α + iβ)T*)/2
        let n = f.len();
        let mut tadj_f = vec![Complex64::new(0.0, 0.0); n];
        self.t.apply_adjoint_into(f, &mut tadj_f);
        let mut gram_f = vec![Complex64::new(0.0, 0.0); n];
        self.t.apply_adjoint_into(&p.tf, &mut gram_f);
        let lo = Complex64::new(alpha, -beta) * 0.5;
        let hi = Complex64::new(alpha, beta) * 0.5;
        let inv = 1.0 / tf_norm;
        let inv3 = inv * inv * inv;
        let grad = (0..n)
            .map(|i| {
                let cf = lo * p.tf[i] + hi * tadj_f[i];
                (cf * 2.0 * inv) - (gram_f[i] * numer * inv3) - (f[i] * numer * inv)
            })
            .collect();
        Some((value, grad))
    }

    /// Value `|w|²/(‖Tf‖²‖f‖²)` and its Euclidean gradient at a unit `f`.
    pub fn total_sqr_value_grad(&self, f: &[Complex64]) -> Option<(f64, Vec<Complex64>)> {
        let p = self.probe(f)?;
        let w2 = p.w.norm_sqr();
        let value = w2 / (p.tf_sqr * p.f_sqr);
        let n = f.len();
        let mut tadj_f = vec![Complex64::new(0.0, 0.0); n];
        self.t.apply_adjoint_into(f, &mut tadj_f);
        let mut gram_f = vec![Complex64::new(0.0, 0.0); n];
        self.t.apply_adjoint_into(&p.tf, &mut gram_f);
        let inv = 1.0 / p.tf_sqr;
        let grad = (0..n)
            .map(|i| {
                (p.w.conj() * p.tf[i] + p.w * tadj_f[i]) * (2.0 * inv)
                    - gram_f[i] * (2.0 * w2 * inv * inv)
                    - f[i] * (2.0 * w2 * inv)
            })
            .collect();
        Some((value, grad))
    }
}

/// `μ_θ(f)` with its ingredients.
pub fn mu_theta_at(t: &ComplexMatrix, theta: Theta, f: &ComplexVector) -> Result<FunctionalSample> {
    check_dim(t, f)?;
    let prep = Prepared::new(t)?;
    let p = prep.probe_checked(f.as_slice())?;
    let denom = p.tf_sqr.sqrt() * p.f_sqr.sqrt();
    let value = (theta.cos() * p.w.re + theta.sin() * p.w.im) / denom;
    Ok(FunctionalSample { theta, value, numerator_a: p.w.re, numerator_b: p.w.im, denom })
}

/// `|⟨Tf, f⟩| / (‖Tf‖‖f‖)`
pub fn total_ratio_at(t: &ComplexMatrix, f: &ComplexVector) -> Result<f64> {
    check_dim(t, f)?;
    let prep = Prepared::new(t)?;
    let p = prep.probe_checked(f.as_slice())?;
    Ok((p.w.norm() / (p.tf_sqr.sqrt() * p.f_sqr.sqrt())).min(1.0))
}

/// Closed-form maximum of `θ ↦ μ_θ(f)`: attained at `θ* = arg⟨Tf, f⟩` with
/// value equal to the total ratio.
pub fn sup_theta_at(t: &ComplexMatrix, f: &ComplexVector) -> Result<ThetaSupremum> {
    check_dim(t, f)?;
    let prep = Prepared::new(t)?;
    let p = prep.probe_checked(f.as_slice())?;
    if p.w.norm() == 0.0 {
        return Ok(ThetaSupremum { theta_star: Theta::ZERO, value: 0.0, undetermined: true });
    }
    let value = (p.w.norm() / (p.tf_sqr.sqrt() * p.f_sqr.sqrt())).min(1.0);
    Ok(ThetaSupremum { theta_star: Theta(p.w.arg()), value, undetermined: false })
}

/// The stationarity residual `E(f)` written out with `A = Re T`, `B = Im T`.
pub fn stationary_residual(t: &ComplexMatrix, theta: Theta, f: &UnitVector) -> Result<ComplexVector> {
    check_dim(t, f)?;
    let prep = Prepared::new(t)?;
    let p = prep.probe_checked(f.as_slice())?;
    let (a_mat, b_mat) = hermitian_parts(t);
    let (c, s) = (theta.cos(), theta.sin());
    let af = a_mat.mul_vec(f)?;
    let bf = b_mat.mul_vec(f)?;
    let tf = ComplexVector::from_vec_unchecked(p.tf.clone());
    let gram_f = crate::linalg::adjoint(t).mul_vec(&tf)?;
    let weight = p.w.re * c + p.w.im * s;
    let lead = af.scale(Complex64::new(c, 0.0)).add(&bf.scale(Complex64::new(s, 0.0)));
    let tail = gram_f.axpy(Complex64::new(p.tf_sqr, 0.0), f);
    Ok(lead.scale(Complex64::new(2.0 * p.tf_sqr, 0.0)).sub(&tail.scale(Complex64::new(weight, 0.0))))
}

/// Gradient of `μ_θ` on the unit sphere, viewing `Cⁿ` as `R²ⁿ` with the real
/// inner product `Re⟨·,·⟩`. Equals `E(f)/‖Tf‖³`.
pub fn riemannian_gradient(t: &ComplexMatrix, theta: Theta, f: &UnitVector) -> Result<ComplexVector> {
    check_dim(t, f)?;
    let prep = Prepared::new(t)?;
    prep.probe_checked(f.as_slice())?;
    let (_, grad) = prep.weighted_value_grad(f.as_slice(), theta.cos(), theta.sin()).expect("probe already succeeded");
    // remove the roundoff-level radial component
    let g = ComplexVector::from_vec_unchecked(grad);
    let radial = inner(&g, f)?.re;
    Ok(g.axpy(Complex64::new(-radial, 0.0), f))
}

/// `ε*(f) = Re⟨e^{iθ}f, Tf⟩ / ‖Tf‖²`.
pub fn epsilon_star(t: &ComplexMatrix, theta: Theta, f: &UnitVector) -> Result<f64> {
    check_dim(t, f)?;
    let prep = Prepared::new(t)?;
    let p = prep.probe_checked(f.as_slice())?;
    // ⟨λf, Tf⟩ = λ·conj(w)
    Ok((theta.unit() * p.w.conj()).re / p.tf_sqr)
}

fn check_dim(t: &ComplexMatrix, f: &ComplexVector) -> Result<()> {
    if t.dim() != f.len() {
        return Err(Error::DimensionMismatch { expected: t.dim(), found: f.len() });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn example() -> ComplexMatrix {
        ComplexMatrix::from_diag(&[c(2.0, -3.0), c(3.0, 2.0)]).unwrap()
    }

    fn th(x: f64) -> Theta {
        Theta::new(x).unwrap()
    }

    fn vecc(v: &[(f64, f64)]) -> ComplexVector {
        ComplexVector::new(v.iter().map(|&(a, b)| c(a, b)).collect()).unwrap()
    }

    #[test]
    fn mu_theta_examples() {
        let s13 = 13f64.sqrt();
        let e1 = ComplexVector::basis(2, 0);
        let e2 = ComplexVector::basis(2, 1);
        assert!((mu_theta_at(&example(), th(0.0), &e1).unwrap().value - 2.0 / s13).abs() < 1e-15);
        assert!((mu_theta_at(&example(), th(0.0), &e2).unwrap().value - 3.0 / s13).abs() < 1e-15);
        let f = vecc(&[(0.3, -0.2), (1.1, 0.4), (-0.5, 0.9)]);
        for x in [0.0, 0.7, 2.0, -1.3] {
            let v = mu_theta_at(&ComplexMatrix::identity(3), th(x), &f).unwrap().value;
            assert!((v - x.cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn sample_invariants() {
        let f = vecc(&[(0.3, -0.2), (1.1, 0.4)]);
        let s = mu_theta_at(&example(), th(1.1), &f).unwrap();
        let lhs = s.value * s.denom;
        let rhs = 1.1f64.cos() * s.numerator_a + 1.1f64.sin() * s.numerator_b;
        assert!((lhs - rhs).abs() < 1e-12);
        assert!(s.value.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn degenerate_and_zero_vectors() {
        let t = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let e2 = ComplexVector::basis(2, 1);
        assert!(matches!(mu_theta_at(&t, th(0.0), &e2), Err(Error::DegenerateVector(_))));
        assert_eq!(mu_theta_at(&t, th(0.0), &ComplexVector::zeros(2)), Err(Error::ZeroVector));
        assert_eq!(
            mu_theta_at(&ComplexMatrix::zeros(2), th(0.0), &ComplexVector::basis(2, 0)),
            Err(Error::ZeroOperator)
        );
    }

    #[test]
    fn total_ratio_examples() {
        let half = vecc(&[(FRAC_PI_4.cos(), 0.0), (0.0, FRAC_PI_4.sin())]);
        assert!((total_ratio_at(&example(), &half).unwrap() - 1.0 / SQRT_2).abs() < 1e-15);
        assert!((total_ratio_at(&example(), &ComplexVector::basis(2, 0)).unwrap() - 1.0).abs() < 1e-15);
        let f = vecc(&[(0.3, -0.2), (1.1, 0.4)]);
        assert!((total_ratio_at(&ComplexMatrix::identity(2), &f).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sup_theta_examples() {
        let s = sup_theta_at(&example(), &ComplexVector::basis(2, 0)).unwrap();
        assert!((s.theta_star.radians() - c(2.0, -3.0).arg()).abs() < 1e-15);
        assert!((s.value - 1.0).abs() < 1e-15);
        let s = sup_theta_at(&ComplexMatrix::identity(2), &vecc(&[(0.2, 0.1), (0.0, 1.0)])).unwrap();
        assert_eq!(s.theta_star.radians(), 0.0);
        assert!((s.value - 1.0).abs() < 1e-15);
        // ⟨Tf, f⟩ = 0 for T = diag(1, −1), f = (1, 1)/√2
        let t = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let s = sup_theta_at(&t, &vecc(&[(1.0, 0.0), (1.0, 0.0)])).unwrap();
        assert!(s.undetermined && s.value == 0.0 && s.theta_star == Theta::ZERO);
    }

    #[test]
    fn residual_vanishes_at_known_critical_points() {
        let e1 = UnitVector::basis(2, 0);
        let r = stationary_residual(&example(), th(0.0), &e1).unwrap();
        assert!(r.norm() < 1e-13);
        let f = vecc(&[(0.3, -0.2), (1.1, 0.4), (-0.5, 0.9)]).normalized().unwrap();
        let r = stationary_residual(&ComplexMatrix::identity(3), th(0.9), &f).unwrap();
        assert!(r.norm() < 1e-14);
    }

    #[test]
    fn gradient_zero_at_eigenvector_of_normal() {
        let e1 = UnitVector::basis(2, 0);
        let g = riemannian_gradient(&example(), th(c(2.0, -3.0).arg()), &e1).unwrap();
        assert!(g.norm() < 1e-14);
    }

    #[test]
    fn gradient_tangent_and_nonzero() {
        let f = vecc(&[(1.0, 0.0), (1.0, 0.0)]).normalized().unwrap();
        let g = riemannian_gradient(&example(), th(0.0), &f).unwrap();
        assert!(g.norm() > 1e-3);
        assert!(inner(&g, &f).unwrap().re.abs() < 1e-15);
    }

    #[test]
    fn epsilon_star_examples() {
        let e1 = UnitVector::basis(2, 0);
        assert!((epsilon_star(&example(), th(0.0), &e1).unwrap() - 2.0 / 13.0).abs() < 1e-15);
        let v = epsilon_star(&example(), th(FRAC_PI_4), &e1).unwrap();
        assert!((v + 1.0 / (13.0 * SQRT_2)).abs() < 1e-15);
        let f = vecc(&[(0.3, -0.2), (1.1, 0.4)]).normalized().unwrap();
        assert!((epsilon_star(&ComplexMatrix::identity(2), th(0.0), &f).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn special_angle_integrands() {
        let t = ComplexMatrix::from_rows(&[vec![c(1.0, 0.5), c(-0.3, 0.2)], vec![c(0.4, -0.1), c(0.2, 0.9)]]).unwrap();
        let f = vecc(&[(0.3, -0.2), (1.1, 0.4)]);
        let tf = t.mul_vec(&f).unwrap();
        let w = inner(&tf, &f).unwrap();
        let d = tf.norm() * f.norm();
        let re = mu_theta_at(&t, th(0.0), &f).unwrap().value;
        let im = mu_theta_at(&t, th(FRAC_PI_2), &f).unwrap().value;
        let sym = mu_theta_at(&t, th(FRAC_PI_4), &f).unwrap().value;
        assert!((re - w.re / d).abs() < 1e-15);
        assert!((im - w.im / d).abs() < 1e-15);
        assert!((sym - (w.re + w.im) / (SQRT_2 * d)).abs() < 1e-15);
    }

    #[test]
    fn theta_canonical() {
        assert!((th(-FRAC_PI_2).canonical() - 3.0 * FRAC_PI_2).abs() < 1e-15);
        assert_eq!(th(TAU).canonical(), 0.0);
        assert!(Theta::new(f64::NAN).is_err());
    }
}
