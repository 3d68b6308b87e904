//! Executable checks of the identities relating antieigenvalues, centres of
//! mass and the numerical range, on given or randomly generated matrices.
//!
//! Every check yields a [`VerificationReport`] whose `pass` flag is exactly
//! `gap <= tolerance`. Reports in [`Mode::Report`] record agreement but are
//! not expected to pass for every matrix.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, TAU};
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::centre::{cos_from_distance, real_centre_of_mass, total_centre_of_mass, witness_vector};
use crate::error::{Error, Result};
use crate::functionals::{mu_theta_at, sup_theta_at, total_ratio_at, Theta};
use crate::golden::golden_section;
use crate::linalg::{adjoint, ComplexMatrix, ComplexVector};
use crate::sphere::{
    minimize_mu_squared, minimize_mu_theta, minimize_weighted_integrand, selfadjoint_cos, selfadjoint_cos_unscaled,
    total_antieigenvalue, OptimizerConfig,
};

/// Points in the θ grid used for the per-vector supremum over θ.
pub const POINTWISE_SUP_GRID: usize = 100_000;
/// Points in the θ grid used for outer optimizations over θ.
pub const THETA_GRID: usize = 720;
/// Random probe vectors used to test the sign condition.
pub const SIGN_PROBES: usize = 10_000;

/// Which identity a report checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    /// `1 − inf_f μ_θ(f)² = min_ε ‖e^{iθ}I − εT‖²`
    MinMax,
    /// `max_θ μ_θ(f) = |⟨Tf,f⟩|/(‖Tf‖‖f‖)`
    PointwiseSup,
    /// `min_θ min_ε ‖I − εe^{iθ}T‖ = min_λ ‖I − λT‖`
    RotatedCentre,
    /// `μ_θ(T)` equals `μ_θ` at the centre-of-mass witness (reported only)
    CentreWitness,
    /// `|cos|T = inf_f sup_θ μ_θ(f)`
    TotalSupInf,
    /// `|cos|T = sup_θ μ_θ(T)`
    TotalSupTheta,
    RealCase,
    ImaginaryCase,
    SymmetricCase,
    Kantorovich,
}

impl Identity {
    pub fn name(self) -> &'static str {
        match self {
            Identity::MinMax => "minmax",
            Identity::PointwiseSup => "pointwise-sup",
            Identity::RotatedCentre => "rotated-centre",
            Identity::CentreWitness => "centre-witness",
            Identity::TotalSupInf => "total-sup-inf",
            Identity::TotalSupTheta => "total-sup-theta",
            Identity::RealCase => "real-case",
            Identity::ImaginaryCase => "imaginary-case",
            Identity::SymmetricCase => "symmetric-case",
            Identity::Kantorovich => "kantorovich",
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Whether a failing report counts as a failure of the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Assert,
    Report,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: Identity,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub mode: Mode,
    pub notes: String,
}

impl VerificationReport {
    fn new(identity: Identity, lhs: f64, rhs: f64, tolerance: f64, mode: Mode, notes: String) -> Self {
        let gap = (lhs - rhs).abs();
        Self { identity, lhs, rhs, gap, tolerance, pass: gap <= tolerance, mode, notes }
    }

    /// True unless this is an asserted identity that failed.
    pub fn acceptable(&self) -> bool {
        self.pass || self.mode == Mode::Report
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ensemble {
    General,
    Normal,
    Hermitian,
    HermitianPositiveDefinite,
    Diagonal,
}

impl Ensemble {
    pub const ALL: [Ensemble; 5] = [
        Ensemble::General,
        Ensemble::Normal,
        Ensemble::Hermitian,
        Ensemble::HermitianPositiveDefinite,
        Ensemble::Diagonal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Ensemble::General => "general",
            Ensemble::Normal => "normal",
            Ensemble::Hermitian => "hermitian",
            Ensemble::HermitianPositiveDefinite => "hermitian-positive-definite",
            Ensemble::Diagonal => "diagonal",
        }
    }

    /// Accepts the full names plus `pd` and `hermitian-pd`.
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "general" => Some(Ensemble::General),
            "normal" => Some(Ensemble::Normal),
            "hermitian" => Some(Ensemble::Hermitian),
            "hermitian-positive-definite" | "hermitian-pd" | "pd" => Some(Ensemble::HermitianPositiveDefinite),
            "diagonal" => Some(Ensemble::Diagonal),
            _ => None,
        }
    }
}

/// Recipe for a deterministic random matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomMatrixSpec {
    pub n: usize,
    pub ensemble: Ensemble,
    pub scale: f64,
    pub seed: u64,
}

impl RandomMatrixSpec {
    pub const MIN_DIM: usize = 2;
    pub const MAX_DIM: usize = 8;

    pub fn validate(&self) -> Result<()> {
        if !(Self::MIN_DIM..=Self::MAX_DIM).contains(&self.n) {
            return Err(Error::InvalidArgument(format!(
                "random matrix dimension {} outside [{}, {}]",
                self.n,
                Self::MIN_DIM,
                Self::MAX_DIM
            )));
        }
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::InvalidArgument(format!("scale must be positive, got {}", self.scale)));
        }
        Ok(())
    }

    /// Entries of the raw matrices are uniform on `[−1, 1]` in both parts.
    pub fn generate(&self) -> Result<ComplexMatrix> {
        self.validate()?;
        let n = self.n;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut uniform = || Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0));
        let random = |uniform: &mut dyn FnMut() -> Complex64| {
            ComplexMatrix::from_vec_unchecked(n, (0..n * n).map(|_| uniform()).collect())
        };
        let m = match self.ensemble {
            Ensemble::General => random(&mut uniform),
            Ensemble::Diagonal => {
                let d: Vec<Complex64> = (0..n).map(|_| uniform()).collect();
                ComplexMatrix::from_diag(&d)?
            }
            Ensemble::Hermitian => {
                let m = random(&mut uniform);
                m.add(&adjoint(&m))?.scale(Complex64::new(0.5, 0.0))
            }
            Ensemble::HermitianPositiveDefinite => {
                random(&mut uniform).gram().add(&ComplexMatrix::identity(n).scale(Complex64::new(0.1, 0.0)))?
            }
            Ensemble::Normal => {
                let u = orthonormalize(&random(&mut uniform))?;
                let d: Vec<Complex64> = (0..n).map(|_| uniform()).collect();
                u.matmul(&ComplexMatrix::from_diag(&d)?)?.matmul(&adjoint(&u))?
            }
        };
        Ok(m.scale(Complex64::new(self.scale, 0.0)))
    }
}

/// Unitary factor of the columns of `m` (modified Gram–Schmidt, two passes).
fn orthonormalize(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = m.dim();
    let mut cols: Vec<ComplexVector> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = m.column(j);
        for _ in 0..2 {
            for q in &cols {
                let c = crate::linalg::inner(&v, q)?;
                v = v.axpy(-c, q);
            }
        }
        cols.push(v.normalized().ok_or(Error::NoAdmissibleVector)?.into_vector());
    }
    ComplexMatrix::from_columns(&cols)
}

fn theta(x: f64) -> Theta {
    Theta::new(x).expect("finite angle")
}

fn grid_theta(k: usize, count: usize) -> f64 {
    TAU * k as f64 / count as f64
}

/// Maximizes `f` over a uniform θ grid, then refines with golden-section on
/// the two neighbouring cells. Returns `(θ*, f(θ*))`.
fn sup_over_theta(count: usize, mut f: impl FnMut(f64) -> Result<f64>) -> Result<(f64, f64)> {
    let mut values = Vec::with_capacity(count);
    for k in 0..count {
        values.push(f(grid_theta(k, count))?);
    }
    let (k_best, &v_best) =
        values.iter().enumerate().fold((0, &f64::NEG_INFINITY), |acc, (k, v)| if *v > *acc.1 { (k, v) } else { acc });
    let h = TAU / count as f64;
    let centre = grid_theta(k_best, count);
    let mut failure = None;
    let refined = golden_section(
        |x| match f(x) {
            Ok(v) => -v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        },
        centre - h,
        centre + h,
        |x| 1e-10 * (1.0 + x.abs()),
        200,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(if -refined.fx > v_best { (refined.x, -refined.fx) } else { (centre, v_best) })
}

/// Runs the identity checks with one optimizer configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verifier {
    pub cfg: OptimizerConfig,
    /// points in the outer θ grid
    pub theta_grid: usize,
    pub sign_probes: usize,
}

impl Default for Verifier {
    fn default() -> Self {
        Self::new(OptimizerConfig::default())
    }
}

impl Verifier {
    pub fn new(cfg: OptimizerConfig) -> Self {
        Self { cfg, theta_grid: THETA_GRID, sign_probes: SIGN_PROBES }
    }

    /// `1 − inf_f μ_θ(f)²` against `min_ε ‖e^{iθ}I − εT‖²`.
    pub fn verify_minmax(&self, t: &ComplexMatrix, th: Theta, tol: f64) -> Result<VerificationReport> {
        let (sq, _) = minimize_mu_squared(t, th, &self.cfg)?;
        let lhs = 1.0 - sq;
        let d = real_centre_of_mass(&ComplexMatrix::scalar(t.dim(), th.unit()), t)?.distance;
        let notes = format!("theta={}", th.radians());
        Ok(VerificationReport::new(Identity::MinMax, lhs, d * d, tol, Mode::Assert, notes))
    }

    /// Grid maximum of `θ ↦ μ_θ(f)` against `|⟨Tf,f⟩|/(‖Tf‖‖f‖)`.
    pub fn verify_pointwise_sup(&self, t: &ComplexMatrix, f: &ComplexVector, tol: f64) -> Result<VerificationReport> {
        let sample = mu_theta_at(t, Theta::ZERO, f)?;
        let (a, b, den) = (sample.numerator_a, sample.numerator_b, sample.denom);
        let lhs = (0..POINTWISE_SUP_GRID)
            .map(|k| {
                let (s, c) = grid_theta(k, POINTWISE_SUP_GRID).sin_cos();
                (c * a + s * b) / den
            })
            .fold(f64::NEG_INFINITY, f64::max);
        let rhs = total_ratio_at(t, f)?;
        let spacing = TAU / POINTWISE_SUP_GRID as f64;
        let tolerance = tol.max(spacing * spacing);
        Ok(VerificationReport::new(Identity::PointwiseSup, lhs, rhs, tolerance, Mode::Assert, String::new()))
    }

    /// `min_θ min_ε ‖I − εe^{iθ}T‖` against `min_λ ‖I − λT‖`.
    pub fn verify_rotated_centre(&self, t: &ComplexMatrix, tol: f64) -> Result<VerificationReport> {
        let n = t.dim();
        let id = ComplexMatrix::identity(n);
        let (th, neg) =
            sup_over_theta(self.theta_grid, |x| Ok(-real_centre_of_mass(&id, &t.scale(theta(x).unit()))?.distance))?;
        let rhs = total_centre_of_mass(&id, t)?.distance;
        let notes = format!("theta*={}", theta(th).canonical());
        Ok(VerificationReport::new(Identity::RotatedCentre, -neg, rhs, tol, Mode::Assert, notes))
    }

    fn total_and_supinf(&self, t: &ComplexMatrix) -> Result<(f64, f64)> {
        let lhs = total_antieigenvalue(t, &self.cfg)?.value;
        // independent restarts, scored with the per-vector closed form
        let other = total_antieigenvalue(t, &self.cfg.derive(0x7465_3430))?;
        let rhs = sup_theta_at(t, other.witness.as_vector())?.value;
        Ok((lhs, rhs))
    }

    /// `|cos|T` against `inf_f sup_θ μ_θ(f)`.
    pub fn verify_total_sup_inf(&self, t: &ComplexMatrix, tol: f64) -> Result<VerificationReport> {
        let (lhs, rhs) = self.total_and_supinf(t)?;
        Ok(VerificationReport::new(Identity::TotalSupInf, lhs, rhs, tol, Mode::Assert, String::new()))
    }

    /// `inf_f sup_θ μ_θ(f)` against `sup_θ μ_θ(T)`.
    ///
    /// The unsigned equality fails when `0` is interior to the numerical
    /// range: then `μ_θ(T) < 0` for every θ while `|cos|T = 0`. In that case
    /// the report compares `|cos|T` with `sup_θ inf_f |μ_θ(f)|` instead and
    /// says so in `notes`.
    pub fn verify_total_sup_theta(&self, t: &ComplexMatrix, tol: f64) -> Result<VerificationReport> {
        let lhs = total_antieigenvalue(t, &self.cfg)?.value;
        let (th, sup) = sup_over_theta(self.theta_grid, |x| Ok(minimize_mu_theta(t, theta(x), &self.cfg)?.value))?;
        let th = theta(th).canonical();
        if sup >= -tol {
            let notes = format!("theta*={th}");
            return Ok(VerificationReport::new(Identity::TotalSupTheta, lhs, sup, tol, Mode::Assert, notes));
        }
        let (th_abs, sup_abs) = sup_over_theta(self.theta_grid, |x| cos_from_distance(t, theta(x)))?;
        let notes = format!(
            "sign condition fails: sup_theta mu_theta(T)={sup} at theta={th} (0 interior to the numerical range); \
             compared the absolute form, theta*={}",
            theta(th_abs).canonical()
        );
        Ok(VerificationReport::new(Identity::TotalSupTheta, lhs, sup_abs, tol, Mode::Assert, notes))
    }

    /// `μ_θ(T)` against `μ_θ` at the centre-of-mass witness vector.
    pub fn verify_centre_witness(&self, t: &ComplexMatrix, th: Theta, tol: f64) -> Result<VerificationReport> {
        let lhs = minimize_mu_theta(t, th, &self.cfg)?.value;
        let w = witness_vector(t, th)?;
        let rhs = mu_theta_at(t, th, w.f.as_vector())?.value;
        let nonnegative = self.sign_condition(t, th)? && lhs >= -tol;
        let agreement = if (lhs - rhs).abs() <= tol { "agree" } else { "disagree" };
        let notes = format!(
            "theta={}; sign condition (mu_theta >= 0 on {} probes) {}; {agreement}; re_cross={:.3e}, norm_gap={:.3e}",
            th.radians(),
            self.sign_probes,
            if nonnegative { "holds" } else { "fails" },
            w.re_cross,
            w.norm_gap
        );
        Ok(VerificationReport::new(Identity::CentreWitness, lhs, rhs, tol, Mode::Report, notes))
    }

    /// Whether `μ_θ(f) ≥ 0` on every seeded random probe vector.
    pub fn sign_condition(&self, t: &ComplexMatrix, th: Theta) -> Result<bool> {
        let n = t.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.derive(0x7369_676e).seed);
        for _ in 0..self.sign_probes {
            let v: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
                .collect();
            match mu_theta_at(t, th, &ComplexVector::new(v)?) {
                Ok(s) if s.value < 0.0 => return Ok(false),
                Ok(_) | Err(Error::DegenerateVector(_)) | Err(Error::ZeroVector) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(true)
    }

    /// `μ_θ(T)` at θ = 0, π/2, π/4 against direct minimization of the real,
    /// imaginary and symmetric integrands.
    pub fn verify_special_cases(&self, t: &ComplexMatrix, tol: f64) -> Result<Vec<VerificationReport>> {
        let cases = [
            (Identity::RealCase, 0.0, 1.0, 0.0),
            (Identity::ImaginaryCase, FRAC_PI_2, 0.0, 1.0),
            (Identity::SymmetricCase, FRAC_PI_4, FRAC_1_SQRT_2, FRAC_1_SQRT_2),
        ];
        let alt = self.cfg.derive(0x7370_6563);
        cases
            .iter()
            .map(|&(identity, x, alpha, beta)| {
                let lhs = minimize_mu_theta(t, theta(x), &self.cfg)?.value;
                let rhs = minimize_weighted_integrand(t, theta(x), alpha, beta, &alt)?.value;
                Ok(VerificationReport::new(identity, lhs, rhs, tol, Mode::Assert, String::new()))
            })
            .collect()
    }

    /// For Hermitian positive definite `T`: `μ₀(T)` against
    /// `2√(λ₁λₙ)/(λ₁ + λₙ)`. The factor-free variant is shown in `notes`.
    pub fn verify_kantorovich(&self, t: &ComplexMatrix, tol: f64) -> Result<VerificationReport> {
        let lhs = minimize_mu_theta(t, Theta::ZERO, &self.cfg)?.value;
        let rhs = selfadjoint_cos(t)?;
        let notes = format!("factor-free variant sqrt(l1*ln)/(l1+ln)={}", selfadjoint_cos_unscaled(t)?);
        Ok(VerificationReport::new(Identity::Kantorovich, lhs, rhs, tol, Mode::Assert, notes))
    }

    /// Every check on one matrix, in a fixed order.
    pub fn verify_all(&self, t: &ComplexMatrix, tol: f64, probe_seed: u64) -> Result<Vec<VerificationReport>> {
        let mut out = Vec::new();
        for k in 0..8 {
            out.push(self.verify_minmax(t, theta(FRAC_PI_4 * k as f64), tol)?);
        }
        let f = probe_vector(t.dim(), probe_seed);
        match self.verify_pointwise_sup(t, &f, tol) {
            Ok(r) => out.push(r),
            Err(Error::DegenerateVector(_)) => {}
            Err(e) => return Err(e),
        }
        out.push(self.verify_rotated_centre(t, tol)?);
        out.push(self.verify_total_sup_inf(t, tol)?);
        out.push(self.verify_total_sup_theta(t, tol)?);
        for x in [0.0, FRAC_PI_4] {
            out.push(self.verify_centre_witness(t, theta(x), tol)?);
        }
        out.extend(self.verify_special_cases(t, tol)?);
        if t.is_hermitian() && selfadjoint_cos(t).is_ok() {
            out.push(self.verify_kantorovich(t, tol)?);
        }
        Ok(out)
    }

    /// Generates each matrix and runs [`Verifier::verify_all`] on it. Output
    /// is ordered by spec index, then by check order, and does not depend on
    /// scheduling.
    pub fn run_campaign(&self, specs: &[RandomMatrixSpec], tol: f64) -> Result<Vec<CampaignEntry>> {
        let per_spec: Vec<Result<Vec<CampaignEntry>>> = specs
            .par_iter()
            .enumerate()
            .map(|(index, spec)| {
                let t = spec.generate()?;
                let reports = self.verify_all(&t, tol, spec.seed)?;
                Ok(reports.into_iter().map(|report| CampaignEntry { index, spec: *spec, report }).collect())
            })
            .collect();
        let mut out = Vec::new();
        for entries in per_spec {
            out.extend(entries?);
        }
        Ok(out)
    }
}

/// A seeded Gaussian vector for pointwise identities.
pub fn probe_vector(n: usize, seed: u64) -> ComplexVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let v = (0..n).map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))).collect();
    ComplexVector::from_vec_unchecked(v)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignEntry {
    pub index: usize,
    pub spec: RandomMatrixSpec,
    pub report: VerificationReport,
}

/// Pass/total counts per identity, sorted by identity.
pub fn summarize(reports: &[VerificationReport]) -> Vec<(Identity, usize, usize)> {
    let mut counts: std::collections::BTreeMap<Identity, (usize, usize)> = Default::default();
    for r in reports {
        let e = counts.entry(r.identity).or_default();
        e.1 += 1;
        if r.pass {
            e.0 += 1;
        }
    }
    counts.into_iter().map(|(k, (p, n))| (k, p, n)).collect()
}
