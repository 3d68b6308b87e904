//! Dense complex linear algebra: matrices, vectors, the inner product,
//! Hermitian eigendecomposition and the spectral norm.
//!
//! Inner-product convention used throughout the crate: `inner(u, v) = Σ uᵢ·conj(vᵢ)`,
//! linear in the first argument and conjugate-linear in the second, so that
//! `inner(T·f, f)` is the numerical-range value `⟨Tf, f⟩`.

mod eigen;
mod matrix;
mod vector;

pub use eigen::{hermitian_eigen, HermitianEigenDecomposition};
pub use matrix::{adjoint, hermitian_parts, operator_norm, ComplexMatrix};
pub(crate) use vector::inner_slices;
pub use vector::{inner, ComplexVector, UnitVector};

/// Complex scalar type used for every entry.
pub type ComplexScalar = num_complex::Complex64;

/// Largest accepted matrix dimension.
pub const MAX_DIM: usize = 128;
