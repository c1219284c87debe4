//! Dense complex linear algebra: eigendecompositions, rank decisions,
//! subspace arithmetic and spectral matrix functions.
//!
//! The factorizations themselves come from `faer`; this module fixes the
//! conventions on top (ascending eigenvalues, phase rule, a single rank
//! threshold) so that every other module makes the same decisions.

pub mod linalg;
pub mod matrix;
pub mod random;
pub mod subspace;

pub use faer::c64;
pub use linalg::{
    hermitian_eig, hermitian_eigenvalues, inverse, matrix_imaginary_power, matrix_real_power, nullspace,
    nullspace_scaled, positive_function, range_scaled, rank, HermitianEig, Tolerance,
};
pub use matrix::ComplexMatrix;
pub use subspace::{subspace_contains, subspace_equal, Subspace};
