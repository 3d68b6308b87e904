//! Multi-start Riemannian gradient descent on the unit sphere of a subspace.
//!
//! Iterates stay on the sphere by renormalization. Steps start from a
//! Barzilai–Borwein estimate and are shrunk by half until the Armijo
//! condition holds; a slack of a few ulps lets the iteration keep polishing
//! the gradient once the value itself has hit roundoff.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::OptimizerConfig;
use crate::error::{Error, Result};
use crate::functionals::Prepared;
use crate::linalg::inner_slices;

const ARMIJO: f64 = 1e-4;
const SHRINK: f64 = 0.5;
const MAX_BACKTRACKS: usize = 64;
const STAGNATION_LIMIT: usize = 50;
const START_ATTEMPTS: usize = 16;

/// Which scale-invariant functional of `f` is minimized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Objective {
    /// `(α·Re w + β·Im w)/(‖Tf‖‖f‖)`
    Weighted { alpha: f64, beta: f64 },
    /// square of `Weighted`
    WeightedSquared { alpha: f64, beta: f64 },
    /// `|w|²/(‖Tf‖²‖f‖²)`
    TotalSquared,
}

/// A functional restricted to `span(basis)` (or the whole space).
pub(crate) struct Problem<'a> {
    pub prep: &'a Prepared<'a>,
    pub objective: Objective,
    /// orthonormal columns, each of length `n`
    pub basis: Option<&'a [Vec<Complex64>]>,
}

#[derive(Debug, Clone)]
pub(crate) struct RunOutcome {
    pub value: f64,
    /// point in the full space
    pub f: Vec<Complex64>,
}

#[derive(Debug, Clone)]
pub(crate) struct Solution {
    pub f: Vec<Complex64>,
    pub restarts_used: usize,
}

impl Problem<'_> {
    pub fn dim(&self) -> usize {
        self.basis.map_or(self.prep.dim(), |b| b.len())
    }

    pub fn lift(&self, y: &[Complex64]) -> Vec<Complex64> {
        match self.basis {
            None => y.to_vec(),
            Some(cols) => {
                let mut f = vec![Complex64::new(0.0, 0.0); self.prep.dim()];
                for (col, yk) in cols.iter().zip(y) {
                    for (fi, ci) in f.iter_mut().zip(col) {
                        *fi += ci * yk;
                    }
                }
                f
            }
        }
    }

    /// Value and tangent gradient at the unit vector `y` of the subspace.
    pub fn eval(&self, y: &[Complex64]) -> Option<(f64, Vec<Complex64>)> {
        let f = self.lift(y);
        let (value, grad_f) = self.eval_full(&f)?;
        let mut g = match self.basis {
            None => grad_f,
            Some(cols) => cols.iter().map(|col| inner_slices(&grad_f, col)).collect(),
        };
        let radial = inner_slices(&g, y).re;
        for (gi, yi) in g.iter_mut().zip(y) {
            *gi -= yi * radial;
        }
        Some((value, g))
    }

    fn eval_full(&self, f: &[Complex64]) -> Option<(f64, Vec<Complex64>)> {
        match self.objective {
            Objective::Weighted { alpha, beta } => self.prep.weighted_value_grad(f, alpha, beta),
            Objective::WeightedSquared { alpha, beta } => {
                let (mu, g) = self.prep.weighted_value_grad(f, alpha, beta)?;
                Some((mu * mu, g.into_iter().map(|z| z * (2.0 * mu)).collect()))
            }
            Objective::TotalSquared => self.prep.total_sqr_value_grad(f),
        }
    }

    fn start(&self, seed: u64, index: usize) -> Option<(Vec<Complex64>, f64, Vec<Complex64>)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index as u64);
        let m = self.dim();
        for _ in 0..START_ATTEMPTS {
            let y: Vec<Complex64> = (0..m)
                .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
                .collect();
            let y = normalize(y)?;
            if let Some((v, g)) = self.eval(&y) {
                return Some((y, v, g));
            }
        }
        None
    }

    /// One descent run from the `index`-th seeded start.
    pub fn run(&self, cfg: &OptimizerConfig, index: usize) -> Option<RunOutcome> {
        let (mut y, mut v, mut g) = self.start(cfg.seed, index)?;
        let mut prev: Option<(Vec<Complex64>, Vec<Complex64>)> = None;
        let mut best_grad = f64::INFINITY;
        let mut stagnant = 0;

        for _ in 0..cfg.max_iters {
            let gn = norm(&g);
            if gn <= cfg.tol_grad {
                break;
            }
            let mut alpha = match &prev {
                Some((yp, gp)) => {
                    let (mut ss, mut sd) = (0.0, 0.0);
                    for i in 0..y.len() {
                        let s = y[i] - yp[i];
                        let d = g[i] - gp[i];
                        ss += s.norm_sqr();
                        sd += (s * d.conj()).re;
                    }
                    if sd > 0.0 {
                        ss / sd
                    } else {
                        1.0 / gn
                    }
                }
                None => 0.5 / gn,
            };
            // never move more than about a radian in one step
            alpha = alpha.clamp(1e-14, 1.0 / gn);

            let slack = 4.0 * f64::EPSILON * v.abs().max(1.0);
            let mut accepted = None;
            for _ in 0..MAX_BACKTRACKS {
                let trial: Vec<Complex64> = y.iter().zip(&g).map(|(a, b)| a - b * alpha).collect();
                if let Some(trial) = normalize(trial) {
                    if let Some((vn, gn_vec)) = self.eval(&trial) {
                        if vn <= v - ARMIJO * alpha * gn * gn + slack {
                            accepted = Some((trial, vn, gn_vec));
                            break;
                        }
                    }
                }
                alpha *= SHRINK;
            }
            let Some((y_new, v_new, g_new)) = accepted else {
                break;
            };

            let new_gn = norm(&g_new);
            let improved_value = v - v_new >= cfg.tol_value * v.abs().max(1.0);
            let improved_grad = new_gn < 0.5 * best_grad;
            best_grad = best_grad.min(new_gn);
            stagnant = if improved_value || improved_grad { 0 } else { stagnant + 1 };
            prev = Some((std::mem::replace(&mut y, y_new), std::mem::replace(&mut g, g_new)));
            v = v_new;
            if stagnant >= STAGNATION_LIMIT {
                break;
            }
        }
        Some(RunOutcome { value: v, f: self.lift(&y) })
    }

    /// Runs every restart (in parallel) and keeps the smallest value; values
    /// within `tol_value` of each other go to the lowest restart index.
    pub fn solve(&self, cfg: &OptimizerConfig) -> Result<Solution> {
        let outcomes: Vec<Option<RunOutcome>> = (0..cfg.restarts).into_par_iter().map(|i| self.run(cfg, i)).collect();
        let restarts_used = outcomes.iter().filter(|o| o.is_some()).count();
        let mut best: Option<RunOutcome> = None;
        for outcome in outcomes.into_iter().flatten() {
            let replace = match &best {
                None => true,
                Some(b) => outcome.value < b.value - cfg.tol_value,
            };
            if replace {
                best = Some(outcome);
            }
        }
        let best = best.ok_or(Error::NoAdmissibleVector)?;
        Ok(Solution { f: best.f, restarts_used })
    }
}

pub(crate) fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn normalize(mut v: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = norm(&v);
    if n == 0.0 || !n.is_finite() {
        return None;
    }
    v.iter_mut().for_each(|z| *z /= n);
    Some(v)
}

/// Orthonormal basis of the orthogonal complement of `span(vectors)` in `Cⁿ`,
/// by Gram–Schmidt with a second orthogonalization pass.
pub(crate) fn complement_basis(vectors: &[Vec<Complex64>], n: usize) -> Vec<Vec<Complex64>> {
    let mut frame: Vec<Vec<Complex64>> = Vec::new();
    for v in vectors {
        if let Some(u) = orthonormalize_against(v.clone(), &frame) {
            frame.push(u);
        }
    }
    let fixed = frame.len();
    for k in 0..n {
        if frame.len() == n {
            break;
        }
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[k] = Complex64::new(1.0, 0.0);
        if let Some(u) = orthonormalize_against(e, &frame) {
            frame.push(u);
        }
    }
    frame.split_off(fixed)
}

fn orthonormalize_against(mut v: Vec<Complex64>, frame: &[Vec<Complex64>]) -> Option<Vec<Complex64>> {
    let original = norm(&v);
    for _pass in 0..2 {
        for q in frame {
            let c = inner_slices(&v, q);
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= qi * c;
            }
        }
    }
    if norm(&v) <= 1e-8 * original.max(f64::MIN_POSITIVE) {
        return None;
    }
    normalize(v)
}
