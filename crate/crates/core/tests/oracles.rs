//! Cross-checks of the optimizer and centre-of-mass code against independent
//! references: brute-force grids, closed forms, finite differences.

mod common;

use std::f64::consts::{FRAC_PI_4, TAU};

use antieigen::centre::{real_centre_of_mass, total_cos_from_distance};
use antieigen::functionals::{mu_theta_at, riemannian_gradient, Theta};
use antieigen::linalg::{adjoint, inner, operator_norm};
use antieigen::sphere::{
    diagonal_oracle, grid_oracle, higher_antieigenvalues, minimize_mu_squared, minimize_mu_theta, selfadjoint_cos,
    total_antieigenvalue,
};
use antieigen::verify::{Ensemble, RandomMatrixSpec};
use antieigen::{ComplexMatrix, ComplexVector, OptimizerConfig, UnitVector};
use common::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn spec(n: usize, ensemble: Ensemble, seed: u64) -> ComplexMatrix {
    RandomMatrixSpec { n, ensemble, scale: 1.0, seed }.generate().unwrap()
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> UnitVector {
    let v: Vec<Complex64> = (0..n).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    ComplexVector::new(v).unwrap().normalized().unwrap()
}

#[test]
fn optimizer_matches_two_by_two_grid() {
    let cfg = OptimizerConfig::default();
    for seed in 0..6 {
        let t = spec(2, Ensemble::General, seed);
        for k in 0..4 {
            let theta = th(TAU * k as f64 / 4.0 + 0.3);
            let opt = minimize_mu_theta(&t, theta, &cfg).unwrap().value;
            let grid = grid_oracle(&t, theta, 1000).unwrap();
            assert!(opt <= grid + 1e-8, "seed {seed}: {opt} > {grid}");
            assert!(grid - opt <= 1e-4, "seed {seed}: {opt} vs {grid}");
        }
    }
}

#[test]
fn optimizer_never_worse_than_three_by_three_grid() {
    let cfg = OptimizerConfig::default();
    for seed in 0..2 {
        let t = spec(3, Ensemble::General, seed);
        let theta = th(0.4);
        let opt = minimize_mu_theta(&t, theta, &cfg).unwrap().value;
        let grid = grid_oracle(&t, theta, 28).unwrap();
        assert!(opt <= grid + 1e-8 && grid - opt < 2e-2, "{opt} vs {grid}");
    }
}

#[test]
fn normal_matrices_match_the_diagonal_oracle() {
    let cfg = OptimizerConfig::default();
    for seed in 0..4 {
        let d: Vec<Complex64> =
            (0..3).map(|k| Complex64::from_polar(1.0 + k as f64, 0.7 * k as f64 + seed as f64)).collect();
        let u = unitary(3, seed);
        let t = u.matmul(&ComplexMatrix::from_diag(&d).unwrap()).unwrap().matmul(&adjoint(&u)).unwrap();
        for x in [0.0, 1.0, 2.5, 4.0] {
            let opt = minimize_mu_theta(&t, th(x), &cfg).unwrap().value;
            let oracle = diagonal_oracle(&d, th(x), 2000).unwrap();
            assert!((opt - oracle).abs() <= 1e-5, "seed {seed} theta {x}: {opt} vs {oracle}");
        }
    }
}

#[test]
fn positive_definite_matches_kantorovich() {
    let cfg = OptimizerConfig::default();
    for seed in 0..4 {
        let t = spec(5, Ensemble::HermitianPositiveDefinite, seed);
        let opt = minimize_mu_theta(&t, Theta::ZERO, &cfg).unwrap().value;
        assert!((opt - selfadjoint_cos(&t).unwrap()).abs() <= 1e-6);
    }
    let d14 = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(4.0, 0.0)]).unwrap();
    assert!((diagonal_oracle(&d14.diag(), Theta::ZERO, 1000).unwrap() - 0.8).abs() < 1e-12);
}

#[test]
fn gradient_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let h = 1e-6;
    for _ in 0..40 {
        let n = rng.random_range(2..=5);
        let t = spec(n, Ensemble::General, rng.random());
        let theta = th(rng.random_range(0.0..TAU));
        let f = random_unit(&mut rng, n);
        let g = riemannian_gradient(&t, theta, &f).unwrap();
        for _ in 0..5 {
            // tangent direction: remove the component along f
            let d = random_unit(&mut rng, n);
            let d = d.axpy(-c(inner(&d, &f).unwrap().re, 0.0), &f);
            let step = |s: f64| {
                let p = f.axpy(c(s, 0.0), &d).normalized().unwrap();
                mu_theta_at(&t, theta, p.as_vector()).unwrap().value
            };
            let fd = (step(h) - step(-h)) / (2.0 * h);
            let analytic = inner(&g, &d).unwrap().re;
            let scale = analytic.abs().max(g.norm() * d.norm()).max(1e-3);
            assert!((fd - analytic).abs() <= 1e-5 * scale, "{fd} vs {analytic}");
        }
    }
}

#[test]
fn squared_infimum_matches_centre_distance() {
    let cfg = OptimizerConfig::default();
    for (k, ensemble) in Ensemble::ALL.into_iter().enumerate() {
        let t = spec(3, ensemble, 40 + k as u64);
        for x in [0.0, FRAC_PI_4, 2.0, 5.0] {
            let (sq, _) = minimize_mu_squared(&t, th(x), &cfg).unwrap();
            let d = real_centre_of_mass(&ComplexMatrix::scalar(3, Complex64::from_polar(1.0, x)), &t).unwrap().distance;
            assert!((1.0 - sq - d * d).abs() <= 1e-5, "{ensemble:?} {x}: {} vs {}", 1.0 - sq, d * d);
        }
    }
}

#[test]
fn total_cosine_agrees_across_modules() {
    let cfg = OptimizerConfig::default();
    for seed in 0..3 {
        let t = spec(4, Ensemble::General, 70 + seed);
        let opt = total_antieigenvalue(&t, &cfg).unwrap().value;
        let com = total_cos_from_distance(&t).unwrap();
        assert!((opt - com).abs() <= 1e-4, "{opt} vs {com}");
    }
}

#[test]
fn deflated_witnesses_are_orthogonal() {
    let cfg = OptimizerConfig::default();
    let t = spec(4, Ensemble::General, 5);
    let stages = higher_antieigenvalues(&t, th(0.3), 4, &cfg).unwrap();
    assert!(stages.len() >= 2);
    for (i, a) in stages.iter().enumerate() {
        for b in &stages[i + 1..] {
            assert!(inner(a.witness.as_vector(), b.witness.as_vector()).unwrap().norm() <= 1e-10);
        }
    }
    for pair in stages.windows(2) {
        assert!(pair[0].value <= pair[1].value + 1e-9);
    }
}

#[test]
fn optimizer_beats_random_probes() {
    let cfg = OptimizerConfig::default();
    let t = spec(3, Ensemble::General, 9);
    let theta = th(1.1);
    let best = minimize_mu_theta(&t, theta, &cfg).unwrap().value;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10_000 {
        let f = random_unit(&mut rng, 3);
        assert!(best <= mu_theta_at(&t, theta, f.as_vector()).unwrap().value + 1e-8);
    }
    assert!(operator_norm(&t) > 0.0);
}
