//! Brute-force reference values for `μ_θ(T)`, independent of the descent code.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::functionals::Theta;
use crate::golden::golden_section;
use crate::linalg::ComplexMatrix;

/// `μ_θ(T)` for `T = diag(λ₁, …, λₙ)`.
///
/// With `tⱼ = |fⱼ|²` on the probability simplex, `⟨Tf, f⟩ = Σ λⱼtⱼ` and
/// `‖Tf‖² = Σ |λⱼ|²tⱼ`. On each slice `Σ|λⱼ|²tⱼ = s` the numerator is linear,
/// so the minimum sits on an edge of the simplex: scanning every pair `(j, k)`
/// with `t ∈ [0, 1]` on a grid of `grid` cells, then golden-section refining
/// the best cell of each pair, is exhaustive.
pub fn diagonal_oracle(diag_entries: &[Complex64], theta: Theta, grid: usize) -> Result<f64> {
    if grid == 0 {
        return Err(Error::InvalidArgument("grid must be positive".into()));
    }
    if diag_entries.iter().all(|z| z.norm() == 0.0) {
        return Err(Error::ZeroOperator);
    }
    let rot = theta.unit().conj();
    let weights: Vec<(f64, f64)> = diag_entries.iter().map(|l| ((rot * l).re, l.norm_sqr())).collect();

    let mut best = f64::INFINITY;
    for &(c, p) in &weights {
        if p > 0.0 {
            best = best.min(c / p.sqrt());
        }
    }
    for j in 0..weights.len() {
        for k in (j + 1)..weights.len() {
            let (cj, pj) = weights[j];
            let (ck, pk) = weights[k];
            let edge = |t: f64| {
                let den = t * pj + (1.0 - t) * pk;
                if den <= 0.0 {
                    f64::INFINITY
                } else {
                    (t * cj + (1.0 - t) * ck) / den.sqrt()
                }
            };
            let (mut arg, mut val) = (0, f64::INFINITY);
            for i in 0..=grid {
                let v = edge(i as f64 / grid as f64);
                if v < val {
                    arg = i;
                    val = v;
                }
            }
            let lo = arg.saturating_sub(1) as f64 / grid as f64;
            let hi = (arg + 1).min(grid) as f64 / grid as f64;
            let refined = golden_section(edge, lo, hi, |_| 1e-14, 400);
            best = best.min(val).min(refined.fx);
        }
    }
    Ok(best)
}

/// Minimum of `μ_θ` over a deterministic grid on the unit sphere of `Cⁿ`
/// modulo global phase, for `n ≤ 3`, with `resolution` points per axis.
///
/// * `n = 2`: `f = (cos α, sin α·e^{iφ})`, `α ∈ [0, π/2]`, `φ ∈ [0, 2π)`.
/// * `n = 3`: `f = (cos α, sin α cos β·e^{iφ₂}, sin α sin β·e^{iφ₃})`.
///
/// Angles rather than `|z₁|²` are gridded so the points are evenly spread
/// near the poles. The result upper-bounds `μ_θ(T)`.
pub fn grid_oracle(t: &ComplexMatrix, theta: Theta, resolution: usize) -> Result<f64> {
    let n = t.dim();
    if n > 3 {
        return Err(Error::OracleDimension(n));
    }
    if resolution < 2 {
        return Err(Error::InvalidArgument("resolution must be at least 2".into()));
    }
    if t.is_zero() {
        return Err(Error::ZeroOperator);
    }
    let norm = crate::linalg::operator_norm(t);
    let rot = theta.unit().conj();
    let eval = |f: &[Complex64]| -> f64 {
        let tf = t.apply(f);
        let tf_norm = tf.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let f_norm = f.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if tf_norm <= crate::functionals::DEGENERATE_RATIO * norm * f_norm {
            return f64::INFINITY;
        }
        let w: Complex64 = tf.iter().zip(f).map(|(a, b)| a * b.conj()).sum();
        (rot * w).re / (tf_norm * f_norm)
    };

    let polar = |i: usize| FRAC_PI_2 * i as f64 / (resolution - 1) as f64;
    let phase = |j: usize| Complex64::from_polar(1.0, TAU * j as f64 / resolution as f64);

    let best = match n {
        1 => eval(&[Complex64::new(1.0, 0.0)]),
        2 => (0..resolution)
            .into_par_iter()
            .map(|i| {
                let (s, c) = polar(i).sin_cos();
                (0..resolution).map(|j| eval(&[Complex64::new(c, 0.0), phase(j) * s])).fold(f64::INFINITY, f64::min)
            })
            .reduce(|| f64::INFINITY, f64::min),
        _ => (0..resolution)
            .into_par_iter()
            .map(|i| {
                let (sa, ca) = polar(i).sin_cos();
                let mut local = f64::INFINITY;
                for k in 0..resolution {
                    let (sb, cb) = polar(k).sin_cos();
                    for j2 in 0..resolution {
                        let z2 = phase(j2) * (sa * cb);
                        for j3 in 0..resolution {
                            let z3 = phase(j3) * (sa * sb);
                            local = local.min(eval(&[Complex64::new(ca, 0.0), z2, z3]));
                        }
                    }
                }
                local
            })
            .reduce(|| f64::INFINITY, f64::min),
    };
    if best.is_finite() {
        Ok(best)
    } else {
        Err(Error::NoAdmissibleVector)
    }
}
