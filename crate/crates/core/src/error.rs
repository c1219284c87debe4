use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library reports.
///
/// Variants split into two families: input validation (malformed tables,
/// non-unitary matrices, mismatched parents) and numerical failures where a
/// tolerance-dependent decision could not be made. [`Error::is_numerical`]
/// tells them apart.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian: |A - A*| = {residual:.3e}")]
    NotHermitian { residual: f64 },
    #[error("eigen/singular value iteration did not converge")]
    NoConvergence,
    #[error("matrix is not positive definite: smallest eigenvalue {min_eigenvalue:.3e}")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("NotLatinSquare: {detail} (witness {witness:?})")]
    NotLatinSquare { witness: [usize; 3], detail: String },
    #[error("NoIdentity: no two-sided identity element (witness {witness:?})")]
    NoIdentity { witness: [usize; 3] },
    #[error("NoInverse: element {} has no inverse (witness {witness:?})", witness[0])]
    NoInverse { witness: [usize; 3] },
    #[error("NotAssociative: ({0}*{1})*{2} != {0}*({1}*{2})", witness[0], witness[1], witness[2])]
    NotAssociative { witness: [usize; 3] },
    #[error("group order {order} exceeds the enumeration bound {bound}")]
    OrderBoundExceeded { order: usize, bound: usize },
    #[error("objects belong to different groups")]
    ParentMismatch,
    #[error("{0} is not a subgroup")]
    NotASubgroup(String),

    #[error("matrix for element {element} is not unitary (residual {residual:.3e})")]
    NotUnitary { element: usize, residual: f64 },
    #[error("not a homomorphism: rho({a})rho({b}) != rho({a}*{b}) (residual {residual:.3e})")]
    NotAHomomorphism { a: usize, b: usize, residual: f64 },
    #[error("matrix for element {element} is singular")]
    SingularMatrix { element: usize },
    #[error("vector has zero norm")]
    ZeroVector,
    #[error("decomposition failed: {0}")]
    DecompositionFailed(String),
    #[error("representation is not irreducible (<chi, chi> = {norm:.6})")]
    NotIrreducible { norm: f64 },
    #[error("irrep table is incomplete: sum of squared dimensions {sum} != group order {order}")]
    IncompleteTable { sum: usize, order: usize },

    #[error("subalgebra is not contained in the ambient algebra (residual {residual:.3e})")]
    NotContained { residual: f64 },
    #[error("center split failed after {attempts} attempts: {detail}")]
    CenterSplitFailed { attempts: usize, detail: String },
    #[error("action does not preserve the algebra (residual {residual:.3e})")]
    NotInvariantAlgebra { residual: f64 },
    #[error("algebra closure did not stabilise within {steps} steps")]
    ClosureDidNotStabilise { steps: usize },

    #[error("state is not faithful: smallest eigenvalue {min_eigenvalue:.3e}")]
    NotFaithful { min_eigenvalue: f64 },
    #[error("invalid state: {0}")]
    InvalidState(String),
}

impl Error {
    /// True when the failure comes from a tolerance-dependent numerical decision
    /// rather than from malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence
                | Error::DecompositionFailed(_)
                | Error::CenterSplitFailed { .. }
                | Error::ClosureDidNotStabilise { .. }
        )
    }

    /// Short machine-readable name, used in CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NoConvergence => "NoConvergence",
            Error::NotPositiveDefinite { .. } => "NotPositiveDefinite",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidInput(_) => "InvalidInput",
            Error::NotLatinSquare { .. } => "NotLatinSquare",
            Error::NoIdentity { .. } => "NoIdentity",
            Error::NoInverse { .. } => "NoInverse",
            Error::NotAssociative { .. } => "NotAssociative",
            Error::OrderBoundExceeded { .. } => "OrderBoundExceeded",
            Error::ParentMismatch => "ParentMismatch",
            Error::NotASubgroup(_) => "NotASubgroup",
            Error::NotUnitary { .. } => "NotUnitary",
            Error::NotAHomomorphism { .. } => "NotAHomomorphism",
            Error::SingularMatrix { .. } => "SingularMatrix",
            Error::ZeroVector => "ZeroVector",
            Error::DecompositionFailed(_) => "DecompositionFailed",
            Error::NotIrreducible { .. } => "NotIrreducible",
            Error::IncompleteTable { .. } => "IncompleteTable",
            Error::NotContained { .. } => "NotContained",
            Error::CenterSplitFailed { .. } => "CenterSplitFailed",
            Error::NotInvariantAlgebra { .. } => "NotInvariantAlgebra",
            Error::ClosureDidNotStabilise { .. } => "ClosureDidNotStabilise",
            Error::NotFaithful { .. } => "NotFaithful",
            Error::InvalidState(_) => "InvalidState",
        }
    }
}
