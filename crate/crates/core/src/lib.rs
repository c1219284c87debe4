//! Finite groups acting on matrix algebras: Peter-Weyl analysis,
//! commutants and fixed-point algebras, the Galois correspondence, modular
//! theory, crossed products and martingales from Haar averaging.

pub mod algebras;
pub mod crossed;
pub mod error;
pub mod fixtures;
pub mod galois;
pub mod groups;
pub mod io;
pub mod modular;
pub mod ncprob;
pub mod numerics;
pub mod representations;

pub use error::{Error, Result};

pub use algebras::{BlockStructure, StarAlgebra};
pub use crossed::{Action, CrossedProduct};
pub use galois::{CommutantKind, GaloisReport, Violation};
pub use groups::{FiniteGroup, GroupFunction, Subgroup};
pub use modular::{GNSSpace, ModularData};
pub use ncprob::{Filtration, Martingale, NCProbSpace, State};
pub use numerics::{c64, ComplexMatrix, Tolerance};
pub use representations::{IrrepTable, UnitaryRep};
