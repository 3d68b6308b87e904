//! Operator trigonometry for dense complex matrices.
//!
//! The crate computes θ-antieigenvalues `μ_θ(T) = inf_f (cos θ·Re⟨Tf,f⟩ +
//! sin θ·Im⟨Tf,f⟩)/(‖Tf‖‖f‖)`, total antieigenvalues `|cos|T`, their
//! minimizing vectors, and the real and complex centres of mass
//! `argmin ‖B − εA‖`, and it checks the identities tying these together.
//!
//! Modules, bottom-up:
//!
//! * [`linalg`]: matrices, vectors, Hermitian eigensolver, spectral norm.
//! * [`functionals`]: pointwise values, gradients and stationarity residuals.
//! * [`sphere`]: global minimization over the unit sphere plus brute-force oracles.
//! * [`centre`]: centres of mass and the distance/cosine conversions.
//! * [`verify`]: executable identity checks and random campaigns.
//! * [`sweep`]: μ_θ sampled over a θ grid.
//! * [`document`]: the JSON matrix document format and argument parsers.

pub mod centre;
pub mod document;
pub mod error;
pub mod functionals;
mod golden;
pub mod linalg;
pub mod sphere;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use functionals::Theta;
pub use linalg::{ComplexMatrix, ComplexScalar, ComplexVector, UnitVector};
pub use sphere::{AntieigenResult, OptimizerConfig};
