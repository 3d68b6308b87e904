//! Global minimization of the turning functionals over the unit sphere.
//!
//! Every minimizer here is a multi-start Riemannian gradient descent (see
//! [`engine`]) over seeded random starting points. Results are bitwise
//! reproducible for a fixed [`OptimizerConfig::seed`], whether or not the
//! restarts run in parallel. The brute-force oracles in [`oracle`] are
//! independent of the descent code and exist to cross-check it.

pub(crate) mod engine;
mod oracle;

use num_complex::Complex64;

pub use oracle::{diagonal_oracle, grid_oracle};

use self::engine::{complement_basis, Objective, Problem, Solution};
use crate::error::{Error, Result};
use crate::functionals::{Prepared, Theta};
use crate::linalg::{hermitian_eigen, ComplexMatrix, ComplexVector, UnitVector};

/// Settings for the multi-start descent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iters: usize,
    /// stop once the Riemannian gradient norm is below this
    pub tol_grad: f64,
    /// relative value change treated as no progress; also the tie window
    /// when comparing restarts
    pub tol_value: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { restarts: 32, max_iters: 2000, tol_grad: 1e-10, tol_value: 1e-12, seed: 0 }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iters == 0 {
            return Err(Error::InvalidArgument("restarts and max_iters must be positive".into()));
        }
        if !(self.tol_grad > 0.0 && self.tol_value > 0.0) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        Ok(())
    }

    /// Same settings with a seed derived from `self.seed` and `salt`.
    pub fn derive(&self, salt: u64) -> Self {
        Self { seed: splitmix64(self.seed ^ splitmix64(salt)), ..*self }
    }
}

pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// A minimizer of one of the turning functionals.
#[derive(Debug, Clone, PartialEq)]
pub struct AntieigenResult {
    pub theta: Theta,
    pub value: f64,
    /// canonical-phase unit vector attaining `value`
    pub witness: UnitVector,
    /// norm of the stationarity residual at the witness (projected onto the
    /// search subspace for deflated stages)
    pub residual_norm: f64,
    pub restarts_used: usize,
    pub converged: bool,
    /// `‖Tf‖ ≤ 1e-6·‖T‖` at the witness: the values were still falling
    /// toward the kernel of `T`, so the infimum is likely not attained
    pub near_kernel: bool,
}

/// Relative size of `‖Tf‖` below which a witness is flagged as drifting
/// into the kernel.
pub const NEAR_KERNEL: f64 = 1e-6;

/// Residual bound `1e-8·(1 + ‖T‖)³` that certifies a stationary witness.
pub fn residual_bound(norm_t: f64) -> f64 {
    1e-8 * (1.0 + norm_t).powi(3)
}

fn witness_of(f: Vec<Complex64>) -> UnitVector {
    ComplexVector::from_vec_unchecked(f).normalized().expect("optimizer iterates are unit vectors").canonical_phase()
}

fn nonzero(t: &ComplexMatrix) -> Result<Prepared<'_>> {
    Prepared::new(t)
}

/// Minimizes `(α·Re w + β·Im w)/‖Tf‖` over `span(basis)` and packages the
/// result with its residual certificate.
fn minimize_weighted(
    prep: &Prepared<'_>,
    theta: Theta,
    alpha: f64,
    beta: f64,
    basis: Option<&[Vec<Complex64>]>,
    cfg: &OptimizerConfig,
) -> Result<AntieigenResult> {
    cfg.validate()?;
    let problem = Problem { prep, objective: Objective::Weighted { alpha, beta }, basis };
    let Solution { f, restarts_used, .. } = problem.solve(cfg)?;
    let witness = witness_of(f);
    let (value, grad) = prep.weighted_value_grad(witness.as_slice(), alpha, beta).ok_or(Error::NoAdmissibleVector)?;
    let tf_norm = prep.t.apply(witness.as_slice()).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    // E(f) = ‖Tf‖³·grad μ
    let projected = match basis {
        None => engine::norm(&grad),
        Some(cols) => {
            let coeffs: Vec<Complex64> = cols.iter().map(|c| crate::linalg::inner_slices(&grad, c)).collect();
            engine::norm(&coeffs)
        }
    };
    let residual_norm = projected * tf_norm.powi(3);
    let converged = residual_norm <= residual_bound(prep.norm);
    let near_kernel = tf_norm <= NEAR_KERNEL * prep.norm;
    Ok(AntieigenResult { theta, value, witness, residual_norm, restarts_used, converged, near_kernel })
}

/// `μ_θ(T) = inf_f μ_θ(f)` and an attaining vector.
pub fn minimize_mu_theta(t: &ComplexMatrix, theta: Theta, cfg: &OptimizerConfig) -> Result<AntieigenResult> {
    let prep = nonzero(t)?;
    minimize_weighted(&prep, theta, theta.cos(), theta.sin(), None, cfg)
}

/// Minimizes `(α·Re⟨Tf,f⟩ + β·Im⟨Tf,f⟩)/(‖Tf‖‖f‖)` for explicit weights,
/// without going through an angle.
pub(crate) fn minimize_weighted_integrand(
    t: &ComplexMatrix,
    theta: Theta,
    alpha: f64,
    beta: f64,
    cfg: &OptimizerConfig,
) -> Result<AntieigenResult> {
    let prep = nonzero(t)?;
    minimize_weighted(&prep, theta, alpha, beta, None, cfg)
}

/// `inf_f μ_θ(f)²` and an attaining vector. Zero whenever `μ_θ` changes sign
/// on the sphere.
pub fn minimize_mu_squared(t: &ComplexMatrix, theta: Theta, cfg: &OptimizerConfig) -> Result<(f64, UnitVector)> {
    cfg.validate()?;
    let prep = nonzero(t)?;
    let problem = Problem {
        prep: &prep,
        objective: Objective::WeightedSquared { alpha: theta.cos(), beta: theta.sin() },
        basis: None,
    };
    let sol = problem.solve(cfg)?;
    let witness = witness_of(sol.f);
    let (mu, _) =
        prep.weighted_value_grad(witness.as_slice(), theta.cos(), theta.sin()).ok_or(Error::NoAdmissibleVector)?;
    Ok((mu * mu, witness))
}

/// `|cos|T = inf_f |⟨Tf, f⟩|/(‖Tf‖‖f‖)`. The `theta` field carries
/// `arg⟨Tf, f⟩` at the witness, and `residual_norm` is `‖Tf‖³·‖grad r²‖/2`
/// for the squared ratio `r²` (equal to `r·‖E(f)‖` at that angle).
pub fn total_antieigenvalue(t: &ComplexMatrix, cfg: &OptimizerConfig) -> Result<AntieigenResult> {
    cfg.validate()?;
    let prep = nonzero(t)?;
    let problem = Problem { prep: &prep, objective: Objective::TotalSquared, basis: None };
    let sol = problem.solve(cfg)?;
    let witness = witness_of(sol.f);
    let (r2, grad) = prep.total_sqr_value_grad(witness.as_slice()).ok_or(Error::NoAdmissibleVector)?;
    let p = prep.probe(witness.as_slice()).ok_or(Error::NoAdmissibleVector)?;
    let theta = Theta::new(if p.w.norm() == 0.0 { 0.0 } else { p.w.arg() })?;
    let residual_norm = 0.5 * engine::norm(&grad) * p.tf_sqr.powf(1.5);
    Ok(AntieigenResult {
        theta,
        value: r2.max(0.0).sqrt().min(1.0),
        witness,
        residual_norm,
        restarts_used: sol.restarts_used,
        converged: residual_norm <= residual_bound(prep.norm),
        near_kernel: p.tf_sqr.sqrt() <= NEAR_KERNEL * prep.norm,
    })
}

/// The first `k` θ-antieigenvalues: stage `j` minimizes `μ_θ` over the
/// orthogonal complement of the witnesses of stages `1..j`.
///
/// Stops early, returning the stages computed so far, when a stage fails to
/// converge (that stage is included with `converged = false`) or when the
/// remaining subspace lies in the kernel of `T`.
pub fn higher_antieigenvalues(
    t: &ComplexMatrix,
    theta: Theta,
    k: usize,
    cfg: &OptimizerConfig,
) -> Result<Vec<AntieigenResult>> {
    let n = t.dim();
    if k == 0 || k > n {
        return Err(Error::TooManyStages { requested: k, n });
    }
    let prep = nonzero(t)?;
    let mut results: Vec<AntieigenResult> = Vec::with_capacity(k);
    for stage in 0..k {
        let stage_cfg = if stage == 0 { *cfg } else { cfg.derive(stage as u64) };
        let result = if stage == 0 {
            minimize_weighted(&prep, theta, theta.cos(), theta.sin(), None, &stage_cfg)?
        } else {
            let prior: Vec<Vec<Complex64>> = results.iter().map(|r| r.witness.as_slice().to_vec()).collect();
            let basis = complement_basis(&prior, n);
            match minimize_weighted(&prep, theta, theta.cos(), theta.sin(), Some(&basis), &stage_cfg) {
                Ok(r) => r,
                Err(Error::NoAdmissibleVector) => break,
                Err(e) => return Err(e),
            }
        };
        let done = !result.converged;
        results.push(result);
        if done {
            break;
        }
    }
    Ok(results)
}

/// `2√(λ₁λₙ)/(λ₁ + λₙ)` from the extreme eigenvalues of a Hermitian positive
/// definite `T`; this is `μ₀(T)` for such operators.
pub fn selfadjoint_cos(t: &ComplexMatrix) -> Result<f64> {
    let eig = hermitian_eigen(t)?;
    let (hi, lo) = (eig.largest(), eig.smallest());
    if lo <= 0.0 {
        return Err(Error::NotPositiveDefinite(lo));
    }
    Ok(2.0 * (hi * lo).sqrt() / (hi + lo))
}

/// The factor-free variant `√(λ₁λₙ)/(λ₁ + λₙ)`, kept only so reports can show
/// how far it is from the true minimum.
pub fn selfadjoint_cos_unscaled(t: &ComplexMatrix) -> Result<f64> {
    Ok(0.5 * selfadjoint_cos(t)?)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_4, SQRT_2};

    use super::*;
    use crate::functionals::{mu_theta_at, stationary_residual};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn example() -> ComplexMatrix {
        ComplexMatrix::from_diag(&[c(2.0, -3.0), c(3.0, 2.0)]).unwrap()
    }

    fn th(x: f64) -> Theta {
        Theta::new(x).unwrap()
    }

    #[test]
    fn worked_example_cases() {
        let s13 = 13f64.sqrt();
        let cfg = OptimizerConfig::default();
        let boundary = (1.0f64 / 5.0).atan();
        for x in [-2.5, -1.0, 0.0, 0.3, 1.0, 2.0, 3.0] {
            let r = minimize_mu_theta(&example(), th(x), &cfg).unwrap();
            let (expected, z1) = if (x + boundary).sin() <= 0.0 {
                ((3.0 * x.cos() + 2.0 * x.sin()) / s13, 0.0)
            } else {
                ((2.0 * x.cos() - 3.0 * x.sin()) / s13, 1.0)
            };
            assert!((r.value - expected).abs() < 1e-9, "theta {x}: {} vs {expected}", r.value);
            assert!((r.witness[0].norm() - z1).abs() < 1e-4);
            assert!(r.converged);
        }
    }

    #[test]
    fn identity_is_constant() {
        let r = minimize_mu_theta(&ComplexMatrix::identity(3), th(0.8), &OptimizerConfig::default()).unwrap();
        assert!((r.value - 0.8f64.cos()).abs() < 1e-14);
        assert!(r.converged);
    }

    #[test]
    fn value_matches_witness() {
        let t = ComplexMatrix::from_rows(&[vec![c(1.0, 0.5), c(-0.3, 0.2)], vec![c(0.4, -0.1), c(0.2, 0.9)]]).unwrap();
        let r = minimize_mu_theta(&t, th(0.4), &OptimizerConfig::default()).unwrap();
        let direct = mu_theta_at(&t, th(0.4), &r.witness).unwrap().value;
        assert!((direct - r.value).abs() < 1e-12);
        let e = stationary_residual(&t, th(0.4), &r.witness).unwrap();
        assert!((e.norm() - r.residual_norm).abs() < 1e-10);
    }

    #[test]
    fn squared_infimum_examples() {
        let cfg = OptimizerConfig::default();
        let (v, _) = minimize_mu_squared(&example(), th(FRAC_PI_4), &cfg).unwrap();
        assert!(v < 1e-14);
        let (v, _) = minimize_mu_squared(&example(), th(0.0), &cfg).unwrap();
        assert!((v - 4.0 / 13.0).abs() < 1e-10);
        let (v, _) = minimize_mu_squared(&ComplexMatrix::identity(2), th(0.0), &cfg).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn total_examples() {
        let cfg = OptimizerConfig::default();
        let r = total_antieigenvalue(&example(), &cfg).unwrap();
        assert!((r.value - 1.0 / SQRT_2).abs() < 1e-9);
        assert!((r.witness[0].norm_sqr() - 0.5).abs() < 1e-6);
        let r = total_antieigenvalue(&ComplexMatrix::identity(2), &cfg).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn deflation_on_example() {
        let s13 = 13f64.sqrt();
        let rs = higher_antieigenvalues(&example(), th(0.0), 2, &OptimizerConfig::default()).unwrap();
        assert_eq!(rs.len(), 2);
        assert!((rs[0].value - 2.0 / s13).abs() < 1e-9);
        assert!((rs[1].value - 3.0 / s13).abs() < 1e-12);
        assert!((rs[0].witness[0].norm() - 1.0).abs() < 1e-6);
        assert!((rs[1].witness[1].norm() - 1.0).abs() < 1e-6);
        let overlap = crate::linalg::inner(&rs[0].witness, &rs[1].witness).unwrap().norm();
        assert!(overlap < 1e-10);
    }

    #[test]
    fn deflation_stage_one_matches_plain_minimization() {
        let cfg = OptimizerConfig::with_seed(11);
        let t = ComplexMatrix::from_rows(&[vec![c(1.0, 0.5), c(-0.3, 0.2)], vec![c(0.4, -0.1), c(0.2, 0.9)]]).unwrap();
        let rs = higher_antieigenvalues(&t, th(0.3), 1, &cfg).unwrap();
        assert_eq!(rs[0], minimize_mu_theta(&t, th(0.3), &cfg).unwrap());
    }

    #[test]
    fn deflation_identity_and_errors() {
        let rs = higher_antieigenvalues(&ComplexMatrix::identity(3), th(0.0), 3, &OptimizerConfig::default()).unwrap();
        assert_eq!(rs.len(), 3);
        assert!(rs.iter().all(|r| (r.value - 1.0).abs() < 1e-14));
        assert!(matches!(
            higher_antieigenvalues(&example(), th(0.0), 3, &OptimizerConfig::default()),
            Err(Error::TooManyStages { .. })
        ));
    }

    #[test]
    fn selfadjoint_examples() {
        let d14 = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(4.0, 0.0)]).unwrap();
        assert!((selfadjoint_cos(&d14).unwrap() - 0.8).abs() < 1e-15);
        assert!((selfadjoint_cos_unscaled(&d14).unwrap() - 0.4).abs() < 1e-15);
        let cc = ComplexMatrix::from_diag(&[c(2.5, 0.0), c(2.5, 0.0)]).unwrap();
        assert!((selfadjoint_cos(&cc).unwrap() - 1.0).abs() < 1e-15);
        let indefinite = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert!(matches!(selfadjoint_cos(&indefinite), Err(Error::NotPositiveDefinite(_))));
        assert!(matches!(selfadjoint_cos(&example()), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn zero_operator_rejected() {
        assert_eq!(
            minimize_mu_theta(&ComplexMatrix::zeros(2), th(0.0), &OptimizerConfig::default()),
            Err(Error::ZeroOperator)
        );
    }

    #[test]
    fn config_validation() {
        let bad = OptimizerConfig { restarts: 0, ..OptimizerConfig::default() };
        assert!(bad.validate().is_err());
        let bad = OptimizerConfig { tol_grad: 0.0, ..OptimizerConfig::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn kernel_approach_is_flagged() {
        // μ₀ on diag(0, 1) is √(1 − |z₁|²), with infimum 0 only in the limit e₁
        let t = ComplexMatrix::from_diag(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let r = minimize_mu_theta(&t, th(0.0), &OptimizerConfig::default()).unwrap();
        assert!(r.value < 1e-6 && r.near_kernel, "{r:?}");
        let r = minimize_mu_theta(&example(), th(0.0), &OptimizerConfig::default()).unwrap();
        assert!(!r.near_kernel);
    }
}
