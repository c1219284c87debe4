//! Unitary representations of finite groups and their harmonic analysis:
//! unitarization, Weyl operators, decomposition into irreducibles, irrep
//! tables, Schur orthogonality, the Peter-Weyl basis and the Fourier
//! transform on the group algebra.

mod analysis;
mod decompose;
mod table;
mod unitary;

pub use analysis::{
    fourier, inverse_fourier, is_proper, peter_weyl_basis, peter_weyl_residual, plancherel_residual, schur_check,
    FourierBlocks, PeterWeylFunction, ProperReport, SchurReport,
};
pub use decompose::{decompose, decompose_with, Decomposition, COLLISION_GAP, MAX_RESAMPLES};
pub use table::IrrepTable;
pub use unitary::{character, character_inner, matrix_coefficients, measure_rep, unitarize, weyl_operator, UnitaryRep};
