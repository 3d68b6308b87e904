//! `μ_θ(T)` sampled on a uniform θ grid, one row per angle.

use serde::Serialize;

use crate::centre::real_centre_of_mass;
use crate::document::format_vector_exact;
use crate::error::{Error, Result};
use crate::functionals::{epsilon_star, Theta};
use crate::linalg::ComplexMatrix;
use crate::sphere::{minimize_mu_theta, OptimizerConfig};

/// Column order of [`SweepRow`] in CSV output.
pub const SWEEP_COLUMNS: [&str; 5] =
    ["theta", "mu_theta", "witness_params", "epsilon_star_at_witness", "centre_of_mass_distance"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub theta: f64,
    pub mu_theta: f64,
    /// witness entries as `re±imi`, separated by `;`
    pub witness_params: String,
    pub epsilon_star_at_witness: f64,
    /// `min_ε ‖e^{iθ}I − εT‖`
    pub centre_of_mass_distance: f64,
    #[serde(skip)]
    pub converged: bool,
}

impl SweepRow {
    pub fn csv_record(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.theta, self.mu_theta, self.witness_params, self.epsilon_star_at_witness, self.centre_of_mass_distance
        )
    }
}

/// Rows at `θₖ = 2πk/count` for `k = 0..count`.
pub fn sweep(t: &ComplexMatrix, count: usize, cfg: &OptimizerConfig) -> Result<Vec<SweepRow>> {
    if count < 2 {
        return Err(Error::InvalidArgument(format!("theta count must be at least 2, got {count}")));
    }
    let n = t.dim();
    (0..count)
        .map(|k| {
            let theta = Theta::new(std::f64::consts::TAU * k as f64 / count as f64)?;
            let r = minimize_mu_theta(t, theta, cfg)?;
            let eps = epsilon_star(t, theta, &r.witness)?;
            let distance = real_centre_of_mass(&ComplexMatrix::scalar(n, theta.unit()), t)?.distance;
            Ok(SweepRow {
                theta: theta.radians(),
                mu_theta: r.value,
                witness_params: format_vector_exact(r.witness.as_slice()),
                epsilon_star_at_witness: eps,
                centre_of_mass_distance: distance,
                converged: r.converged,
            })
        })
        .collect()
}
